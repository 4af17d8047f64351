#include "wqmc/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wqmc/numeric.hpp"

namespace wqmc {

namespace {

double eval_local(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks,
                             std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
    if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
        throw std::invalid_argument("piecewise poly: inconsistent partition");
    if (std::abs(breaks_.front()) > 1e-14 || std::abs(breaks_.back() - 1.0) > 1e-14)
        throw std::invalid_argument("piecewise poly: domain must be [0,1]");
    for (std::size_t k = 1; k < breaks_.size(); ++k)
        if (breaks_[k] <= breaks_[k - 1])
            throw std::invalid_argument("piecewise poly: breakpoints not increasing");
    for (auto& c : coeffs_)
        if (c.empty()) c.push_back(0.0);
}

PiecewisePoly PiecewisePoly::polynomial(std::vector<double> monomial_coeffs) {
    if (monomial_coeffs.empty()) monomial_coeffs.push_back(0.0);
    PiecewisePoly p;
    p.breaks_ = {0.0, 1.0};
    p.coeffs_ = {std::move(monomial_coeffs)};
    return p;
}

PiecewisePoly PiecewisePoly::constant(double c) { return polynomial({c}); }

std::size_t PiecewisePoly::find_piece(double x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - breaks_.begin());
    if (k == 0) return 0;
    if (k >= breaks_.size()) return coeffs_.size() - 1;
    return k - 1;
}

double PiecewisePoly::eval(double x) const {
    std::size_t k = find_piece(x);
    return eval_local(coeffs_[k], x - breaks_[k]);
}

PiecewisePoly PiecewisePoly::derivative() const {
    PiecewisePoly d;
    d.breaks_ = breaks_;
    d.coeffs_.clear();
    for (const auto& c : coeffs_) {
        std::vector<double> dc;
        for (std::size_t i = 1; i < c.size(); ++i)
            dc.push_back(c[i] * static_cast<double>(i));
        if (dc.empty()) dc.push_back(0.0);
        d.coeffs_.push_back(std::move(dc));
    }
    return d;
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    PiecewisePoly F;
    F.breaks_ = breaks_;
    F.coeffs_.clear();
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        std::vector<double> C(c.size() + 1);
        C[0] = acc;
        for (std::size_t i = 0; i < c.size(); ++i)
            C[i + 1] = c[i] / static_cast<double>(i + 1);
        double h = breaks_[k + 1] - breaks_[k];
        acc = eval_local(C, h);
        F.coeffs_.push_back(std::move(C));
    }
    return F;
}

double PiecewisePoly::integral() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        double h = breaks_[k + 1] - breaks_[k];
        double piece = 0.0;
        for (std::size_t i = c.size(); i-- > 0;)
            piece = piece * h + c[i] / static_cast<double>(i + 1);
        acc += piece * h;
    }
    return acc;
}

double PiecewisePoly::integral_of_square() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        std::vector<double> sq(2 * c.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) sq[i + j] += c[i] * c[j];
        double h = breaks_[k + 1] - breaks_[k];
        double piece = 0.0;
        for (std::size_t i = sq.size(); i-- > 0;)
            piece = piece * h + sq[i] / static_cast<double>(i + 1);
        acc += piece * h;
    }
    return acc;
}

PiecewisePoly PiecewisePoly::restricted_to(const std::vector<double>& breaks) const {
    PiecewisePoly out;
    out.breaks_ = breaks;
    out.coeffs_.clear();
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        double left = breaks[k];
        std::size_t src = find_piece(0.5 * (left + breaks[k + 1]));
        // Shift the source piece from local variable (x - breaks_[src]) to
        // (x - left) via Taylor expansion at the new origin.
        const auto& c = coeffs_[src];
        double s = left - breaks_[src];
        std::vector<double> shifted(c.size(), 0.0);
        // shifted[j] = sum_{i >= j} c[i] * C(i,j) * s^(i-j)
        for (std::size_t i = 0; i < c.size(); ++i) {
            double term = c[i];  // c[i] * C(i,j) * s^(i-j), built up from j = i
            for (std::size_t j = i + 1; j-- > 0;) {
                shifted[j] += term;
                if (j > 0) term *= s * static_cast<double>(j) /
                                   static_cast<double>(i - j + 1);
            }
        }
        out.coeffs_.push_back(std::move(shifted));
    }
    return out;
}

void PiecewisePoly::align(const PiecewisePoly& a, const PiecewisePoly& b,
                          PiecewisePoly& ra, PiecewisePoly& rb) {
    std::vector<double> merged;
    std::merge(a.breaks_.begin(), a.breaks_.end(), b.breaks_.begin(),
               b.breaks_.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                 merged.end());
    ra = a.restricted_to(merged);
    rb = b.restricted_to(merged);
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& rhs) const {
    PiecewisePoly a, b;
    align(*this, rhs, a, b);
    PiecewisePoly out;
    out.breaks_ = a.breaks_;
    out.coeffs_.clear();
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) {
        const auto& ca = a.coeffs_[k];
        const auto& cb = b.coeffs_[k];
        std::vector<double> prod(ca.size() + cb.size() - 1, 0.0);
        for (std::size_t i = 0; i < ca.size(); ++i)
            for (std::size_t j = 0; j < cb.size(); ++j) prod[i + j] += ca[i] * cb[j];
        out.coeffs_.push_back(std::move(prod));
    }
    return out;
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& rhs) const {
    PiecewisePoly a, b;
    align(*this, rhs, a, b);
    PiecewisePoly out;
    out.breaks_ = a.breaks_;
    out.coeffs_.clear();
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) {
        auto ca = a.coeffs_[k];
        const auto& cb = b.coeffs_[k];
        if (cb.size() > ca.size()) ca.resize(cb.size(), 0.0);
        for (std::size_t i = 0; i < cb.size(); ++i) ca[i] += cb[i];
        out.coeffs_.push_back(std::move(ca));
    }
    return out;
}

PiecewisePoly PiecewisePoly::scaled(double c) const {
    PiecewisePoly out = *this;
    for (auto& piece : out.coeffs_)
        for (auto& v : piece) v *= c;
    return out;
}

int PiecewisePoly::degree() const {
    std::size_t d = 0;
    for (const auto& c : coeffs_) d = std::max(d, c.size() - 1);
    return static_cast<int>(d);
}

FourierPoly::FourierPoly(std::vector<std::complex<double>> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (!coeffs_.empty() && std::abs(coeffs_[0].imag()) > 1e-12)
        throw std::invalid_argument("fourier poly: mean coefficient must be real");
}

double FourierPoly::eval(double x) const {
    if (coeffs_.empty()) return 0.0;
    double acc = coeffs_[0].real();
    for (std::size_t h = 1; h < coeffs_.size(); ++h) {
        double arg = 2.0 * std::numbers::pi * static_cast<double>(h) * x;
        acc += 2.0 * (coeffs_[h].real() * std::cos(arg) - coeffs_[h].imag() * std::sin(arg));
    }
    return acc;
}

std::complex<double> FourierPoly::coeff(long long h) const {
    std::size_t a = static_cast<std::size_t>(h < 0 ? -h : h);
    if (a >= coeffs_.size()) return {0.0, 0.0};
    return h < 0 ? std::conj(coeffs_[a]) : coeffs_[a];
}

}  // namespace wqmc
