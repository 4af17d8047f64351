#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "wqmc/univariate_space.hpp"
#include "wqmc/weights.hpp"

namespace wqmc {

// Point of the infinite-dimensional domain: finitely many free coordinates
// followed by a constant tail.
struct TailPoint {
    std::vector<double> prefix;
    double tail = 0.0;
};

// Tensor-product kernel prod_j (1 + k_{gamma_j}(x_j, y_j)) over s coordinates,
// or over infinitely many when s is omitted (evaluation then truncates once
// the remaining log-factors drop below the tolerance).
class ProductKernel {
public:
    static constexpr int kInfinite = -1;

    ProductKernel(UnivariateSpace space, WeightSequence weights, int s,
                  double truncation_tol = 1e-12);

    bool infinite() const { return s_ == kInfinite; }
    int dims() const { return s_; }
    const UnivariateSpace& space() const { return space_; }
    const WeightSequence& weights() const { return weights_; }
    double gamma(int j) const { return weights_.weight(j); }

    // Per-coordinate factor 1 + k_{gamma_j}(x,y) and its integrals.
    double factor(int j, double x, double y) const;
    double factor_mean(int j, double x) const;      // int (1+k)(x,.)
    double factor_double_integral(int j) const;     // over the square

    double eval(std::span<const double> x, std::span<const double> y) const;
    double eval(const TailPoint& x, const TailPoint& y) const;

    // Norm of the integration functional, sqrt of the double integral of the
    // kernel; >= 1 and uniformly bounded for summable weights.
    double integration_norm() const;

private:
    UnivariateSpace space_;
    WeightSequence weights_;
    int s_;
    double truncation_tol_;
};

// Product integrand f(x) = prod_j f_j(x_j) with finitely many active factors
// (all later factors are identically 1).
class ProductFunction {
public:
    ProductFunction() = default;
    explicit ProductFunction(std::vector<UnivariateFunction> factors);

    int active_dims() const { return static_cast<int>(factors_.size()); }
    const UnivariateFunction& factor(int j) const;  // 1-based

    double eval(std::span<const double> x) const;
    double eval(const TailPoint& x) const;

private:
    std::vector<UnivariateFunction> factors_;
};

// prod_j int f_j; coordinates beyond the active prefix contribute 1.
double integrate_exact(const ProductFunction& f);

// Gram matrix of the kernel at design points, with a factorization guarded
// by escalating diagonal jitter.
class GramSystem {
public:
    GramSystem(const ProductKernel& kernel,
               std::vector<std::vector<double>> points);

    int size() const { return static_cast<int>(points_.size()); }
    const Eigen::MatrixXd& matrix() const { return G_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    double quadratic_inverse_form(const Eigen::VectorXd& v) const;  // v^T G^-1 v

private:
    std::vector<std::vector<double>> points_;
    Eigen::MatrixXd G_;
    Eigen::LDLT<Eigen::MatrixXd> solver_;
};

// Norm of the minimum-norm interpolant of (points, values).
double rkhs_norm(const ProductKernel& kernel,
                 const std::vector<std::vector<double>>& points,
                 const std::vector<double>& values);

// Anchored/ANOVA/Fourier decomposition of a product function: with
// g_j = f_j - xi(f_j), the component on subset u is
// f_u = prod_{j in u} g_j * prod_{j notin u} xi(f_j).  Returns the component
// norms ||f_u||_{k_u} and verifies the Parseval identity
// sum_u gamma_u^{-1} ||f_u||^2 = ||f||^2 to 1e-6 relative.
std::map<std::vector<int>, double> decompose(const ProductKernel& kernel,
                                             const ProductFunction& f);

// Compares the interpolation norm of the data in s dimensions with the norm
// of the same data viewed as a cylinder function over `truncation_level`
// coordinates (tails filled with `tail_value`).
struct IsometryCheck {
    bool ok;
    double relative_error;
    double norm_base;
    double norm_padded;
};
IsometryCheck cylinder_isometry_check(const ProductKernel& kernel,
                                      const std::vector<std::vector<double>>& points,
                                      const std::vector<double>& values,
                                      int truncation_level, double tail_value,
                                      double tol);

// Empirical check of the L1 embedding bound (pi/2)^{(s-1)/2} prod_j ||i_j||:
// draws random interpolants, estimates int |f| by Monte Carlo, returns the
// largest observed ratio int|f| / ||f|| and the bound.
struct L1Check {
    double max_ratio;
    double bound;
};
L1Check l1_embedding_check(const ProductKernel& kernel, int trials,
                           std::uint64_t seed);

}  // namespace wqmc
