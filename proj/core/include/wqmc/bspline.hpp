#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wqmc/piecewise_poly.hpp"

namespace wqmc {

// B-spline basis on a uniform partition of [0,1] with clamped ends.
// Interior knots are repeated so the space is exactly C^continuity; taking
// continuity = r-1 yields the largest spline space inside the order-r
// Sobolev space, which also contains the kernel sections whose derivative
// jumps sit at partition points.
class SplineBasis {
public:
    SplineBasis(int degree, int intervals, int continuity);

    int size() const { return size_; }
    int degree() const { return degree_; }
    int intervals() const { return intervals_; }

    // phi_i^(deriv)(x) for all i, as a dense vector (only degree+1 entries
    // are nonzero).
    Eigen::VectorXd point_values(double x, int deriv) const;

    // Gram matrix of the deriv-th derivatives, assembled cell by cell with
    // Gauss quadrature that is exact for the polynomial integrands.
    Eigen::MatrixXd gram(int deriv) const;

    // Integrals of phi_i^(deriv) over [0,1].
    Eigen::VectorXd integrals(int deriv) const;

    // Exact conversion of a spline to its piecewise monomial form.
    PiecewisePoly to_piecewise(const Eigen::VectorXd& coeffs) const;

    // Low-level: values/derivatives of the degree+1 basis functions that are
    // nonzero at x.  ders[k][j] is the k-th derivative of phi_{first+j}.
    void eval_all(double x, int max_deriv, int& first,
                  std::vector<std::vector<double>>& ders) const;

private:
    int find_span(double x) const;

    int degree_;
    int intervals_;
    int continuity_;
    int size_;
    std::vector<double> knots_;
};

}  // namespace wqmc
