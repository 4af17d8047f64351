#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wqmc/bspline.hpp"
#include "wqmc/piecewise_poly.hpp"

namespace wqmc {

enum class Flavor { Standard, Anchored, Anova, Korobov };

Flavor flavor_from_string(const std::string& name);
std::string to_string(Flavor f);

// A univariate function space of smoothness r on [0,1] with a seminorm pair
// (|.|_1, |.|_2).  The four flavors differ in how |.|_1 and the lower-order
// derivative terms of |.|_2 are measured:
//   Standard: |f|_1 = L2 norm of f,     |f|_2^2 = sum_{v=1..r} ||f^(v)||_2^2
//   Anchored: |f|_1 = |f(a)|,           |f|_2^2 = sum_{v<r} f^(v)(a)^2 + ||f^(r)||_2^2
//   Anova:    |f|_1 = |int f|,          |f|_2^2 = sum_{v<r} (int f^(v))^2 + ||f^(r)||_2^2
//   Korobov:  |f|_1 = |fhat(0)|,        |f|_2^2 = sum_{h!=0} |fhat(h)|^2 max(1,|h|^{2r})
// The weighted norm is ||f||^2 = |f|_1^2 + (1/gamma) |f|_2^2, reproduced by
// the kernel 1 + k_gamma.
struct UnivariateSpace {
    Flavor flavor = Flavor::Anchored;
    int r = 1;
    double anchor = 0.0;           // only meaningful for Anchored
    int galerkin_resolution = 512; // partition cells (Fourier cutoff for Korobov)

    void validate() const;
    bool gamma_homogeneous() const { return flavor != Flavor::Standard; }
};

// Test/integrand functions: smooth piecewise polynomials for the Sobolev
// flavors, trigonometric polynomials for the periodic one.
using UnivariateFunction = std::variant<PiecewisePoly, FourierPoly>;

double eval(const UnivariateFunction& f, double x);
double integral(const UnivariateFunction& f);

// (|f|_1, |f|_2), computed exactly from the representation.
std::pair<double, double> seminorms(const UnivariateSpace& space,
                                    const UnivariateFunction& f);

// Weighted norm ||f||_{1+k_gamma}.
double weighted_norm(const UnivariateSpace& space, const UnivariateFunction& f,
                     double gamma);

// k_gamma(x,y): closed form for Anchored/Anova/Korobov, Galerkin-backed for
// Standard.
double kernel_eval(const UnivariateSpace& space, double gamma, double x, double y);

// int_0^1 k_gamma(x,y) dy and the double integral over the square.
double kernel_mean(const UnivariateSpace& space, double gamma, double x);
double kernel_double_integral(const UnivariateSpace& space, double gamma);

// Numerical oracle for (1 + k_gamma) on a grid: reproducing kernel of the
// projection onto a spline subspace (truncated Fourier sum for Korobov).
Eigen::MatrixXd galerkin_kernel(const UnivariateSpace& space, double gamma,
                                const std::vector<double>& grid);

// Gram matrices of the seminorm pair on a shared spline basis; the rank-one
// functional defining |.|_1 is kept separate when it is a point/mean value.
struct SeminormGrams {
    std::shared_ptr<const SplineBasis> basis;
    Eigen::MatrixXd G1;       // Gram of |.|_1^2
    Eigen::MatrixXd G2;       // Gram of |.|_2^2
    Eigen::VectorXd ell1;     // functional vector with G1 = ell1 ell1^T, or empty
};

SeminormGrams seminorm_grams(const UnivariateSpace& space, int resolution);

// Smallest constant (estimated numerically, then inflated 5%) such that
//   |<f,1>_{1,P}| + |f|_{2,P} <= c ||f||_{H,P}   for P in {I, II}, and
//   ||f||_{H,I} <= c ||f||_{H,II},
// together with c0 = 1 / (2 c^4).  Both spaces must share the same
// smoothness r and underlying vector space (Korobov only pairs with itself).
std::pair<double, double> equivalence_constant(const UnivariateSpace& space_i,
                                               const UnivariateSpace& space_ii);

// Cached direct solver for phi^T A^{-1} phi products with
// A = G1 + (1/gamma) G2; shared by the Galerkin kernel and the Standard
// flavor evaluator.
class GalerkinContext {
public:
    GalerkinContext(const UnivariateSpace& space, double gamma);

    double kernel(double x, double y) const;        // value of 1 + k_gamma
    double mean(double x) const;                    // int (1+k)(x,.)
    double double_integral() const;                 // over the square
    const SplineBasis& basis() const { return *grams_.basis; }

private:
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

    SeminormGrams grams_;
    Eigen::MatrixXd A_;
    Eigen::LDLT<Eigen::MatrixXd> solver_;
    Eigen::VectorXd mean_coeffs_;  // A^{-1} b with b_i = int phi_i
    double dd_ = 0.0;              // b^T A^{-1} b
};

// Shared, cached contexts keyed by (flavor, r, anchor, resolution, gamma).
std::shared_ptr<const GalerkinContext> galerkin_context(const UnivariateSpace& space,
                                                        double gamma);

// Random smooth spline in the order-r space, with coefficients drawn from
// the given engine; used as generic test functions.
PiecewisePoly random_spline(int r, int cells, std::uint64_t seed);
FourierPoly random_trig_poly(int r, int max_index, std::uint64_t seed);

}  // namespace wqmc
