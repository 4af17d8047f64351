#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wqmc {

// Polynomial pieces on a partition of [0,1].  Piece k covers
// [breaks[k], breaks[k+1]] and stores monomial coefficients in the local
// variable t = x - breaks[k], lowest degree first.  All calculus on these
// objects is exact up to rounding, which makes them suitable as test
// functions whose seminorms are known in closed form.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breaks,
                  std::vector<std::vector<double>> coeffs);

    // Single global polynomial with coefficients in x, lowest first.
    static PiecewisePoly polynomial(std::vector<double> monomial_coeffs);
    static PiecewisePoly constant(double c);

    double eval(double x) const;
    PiecewisePoly derivative() const;
    PiecewisePoly antiderivative() const;  // primitive with F(0) = 0
    double integral() const;               // over [0,1]
    double integral_of_square() const;     // of the square, over [0,1]

    PiecewisePoly operator*(const PiecewisePoly& rhs) const;
    PiecewisePoly operator+(const PiecewisePoly& rhs) const;
    PiecewisePoly scaled(double c) const;

    int degree() const;
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<std::vector<double>>& pieces() const { return coeffs_; }

private:
    std::size_t find_piece(double x) const;
    // Refine both polys onto a common partition.
    static void align(const PiecewisePoly& a, const PiecewisePoly& b,
                      PiecewisePoly& ra, PiecewisePoly& rb);
    PiecewisePoly restricted_to(const std::vector<double>& breaks) const;

    std::vector<double> breaks_{0.0, 1.0};
    std::vector<std::vector<double>> coeffs_{{0.0}};
};

// Real 1-periodic trigonometric polynomial stored by complex Fourier
// coefficients c_h for |h| <= H with c_{-h} = conj(c_h):
//   f(x) = sum_h c_h exp(2 pi i h x).
class FourierPoly {
public:
    FourierPoly() = default;
    // coeffs[h] for h = 0..H; negative indices are implied by conjugation.
    explicit FourierPoly(std::vector<std::complex<double>> coeffs);

    double eval(double x) const;
    std::complex<double> coeff(long long h) const;
    int max_index() const { return static_cast<int>(coeffs_.size()) - 1; }
    double integral() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }

private:
    std::vector<std::complex<double>> coeffs_;  // index h >= 0
};

}  // namespace wqmc
