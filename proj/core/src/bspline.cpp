#include "wqmc/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wqmc/numeric.hpp"

namespace wqmc {

std::vector<double> bernoulli_coeffs(int n) {
    if (n < 0) throw std::invalid_argument("bernoulli: negative degree");
    // Build B_0..B_n from B_m(x) = sum_k C(m,k) b_{m-k} x^k with Bernoulli
    // numbers b_j from the standard recurrence.
    std::vector<double> bnum(static_cast<std::size_t>(n) + 1, 0.0);
    bnum[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        // sum_{j=0}^{m} C(m+1,j) b_j = 0
        double s = 0.0, binom = 1.0;  // C(m+1,0)
        for (int j = 0; j < m; ++j) {
            s += binom * bnum[static_cast<std::size_t>(j)];
            binom *= static_cast<double>(m + 1 - j) / static_cast<double>(j + 1);
        }
        bnum[static_cast<std::size_t>(m)] = -s / binom;
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
    double binom = 1.0;  // C(n,0)
    for (int k = 0; k <= n; ++k) {
        coeffs[static_cast<std::size_t>(k)] = binom * bnum[static_cast<std::size_t>(n - k)];
        binom *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return coeffs;
}

double bernoulli_poly(int n, double x) {
    auto c = bernoulli_coeffs(n);
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss-legendre: order must be positive");
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

const GaussLegendre& gl16() {
    static const GaussLegendre rule(16);
    return rule;
}

SplineBasis::SplineBasis(int degree, int intervals, int continuity)
    : degree_(degree), intervals_(intervals), continuity_(continuity) {
    if (degree < 1 || intervals < 1)
        throw std::invalid_argument("spline basis: bad degree or interval count");
    if (continuity < 0 || continuity >= degree)
        throw std::invalid_argument("spline basis: continuity must be in [0, degree)");
    int mult = degree - continuity;
    knots_.assign(static_cast<std::size_t>(degree + 1), 0.0);
    for (int i = 1; i < intervals; ++i)
        for (int k = 0; k < mult; ++k)
            knots_.push_back(static_cast<double>(i) / intervals);
    knots_.insert(knots_.end(), static_cast<std::size_t>(degree + 1), 1.0);
    size_ = static_cast<int>(knots_.size()) - degree - 1;
}

int SplineBasis::find_span(double x) const {
    int p = degree_;
    int n = size_ - 1;
    if (x >= knots_[static_cast<std::size_t>(n + 1)]) return n;
    if (x <= knots_[static_cast<std::size_t>(p)]) return p;
    auto it = std::upper_bound(knots_.begin() + p, knots_.begin() + n + 1, x);
    return static_cast<int>(it - knots_.begin()) - 1;
}

// Values and derivatives of the degree_+1 basis functions that are nonzero at
// x, following the standard derivative recurrence for B-splines.
void SplineBasis::eval_all(double x, int max_deriv, int& first,
                           std::vector<std::vector<double>>& ders) const {
    const int p = degree_;
    const int span = find_span(x);
    first = span - p;

    std::vector<std::vector<double>> ndu(static_cast<std::size_t>(p + 1),
                                         std::vector<double>(static_cast<std::size_t>(p + 1)));
    std::vector<double> left(static_cast<std::size_t>(p + 1)),
        right(static_cast<std::size_t>(p + 1));
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[static_cast<std::size_t>(j)] = x - knots_[static_cast<std::size_t>(span + 1 - j)];
        right[static_cast<std::size_t>(j)] = knots_[static_cast<std::size_t>(span + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] =
                right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
            double temp = ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(j - 1)] /
                          ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
            ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = saved;
    }

    const int nd = std::min(max_deriv, p);
    ders.assign(static_cast<std::size_t>(max_deriv + 1),
                std::vector<double>(static_cast<std::size_t>(p + 1), 0.0));
    for (int j = 0; j <= p; ++j)
        ders[0][static_cast<std::size_t>(j)] =
            ndu[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)];

    std::vector<std::vector<double>> a(2, std::vector<double>(static_cast<std::size_t>(p + 1)));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            int rk = r - k, pk = p - k;
            if (r >= k) {
                a[static_cast<std::size_t>(s2)][0] =
                    a[static_cast<std::size_t>(s1)][0] /
                    ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk)];
                d = a[static_cast<std::size_t>(s2)][0] *
                    ndu[static_cast<std::size_t>(rk)][static_cast<std::size_t>(pk)];
            }
            int j1 = (rk >= -1) ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(j)] =
                    (a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(j)] -
                     a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(j - 1)]) /
                    ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk + j)];
                d += a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(j)] *
                     ndu[static_cast<std::size_t>(rk + j)][static_cast<std::size_t>(pk)];
            }
            if (r <= pk) {
                a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(k)] =
                    -a[static_cast<std::size_t>(s1)][static_cast<std::size_t>(k - 1)] /
                    ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(r)];
                d += a[static_cast<std::size_t>(s2)][static_cast<std::size_t>(k)] *
                     ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(pk)];
            }
            ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = d;
            std::swap(s1, s2);
        }
    }
    double factor = static_cast<double>(p);
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j)
            ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *= factor;
        factor *= static_cast<double>(p - k);
    }
}

Eigen::VectorXd SplineBasis::point_values(double x, int deriv) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size_);
    int first;
    std::vector<std::vector<double>> ders;
    eval_all(x, deriv, first, ders);
    for (int j = 0; j <= degree_; ++j)
        v[first + j] = ders[static_cast<std::size_t>(deriv)][static_cast<std::size_t>(j)];
    return v;
}

Eigen::MatrixXd SplineBasis::gram(int deriv) const {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(size_, size_);
    const GaussLegendre& gl = gl16();
    for (int cell = 0; cell < intervals_; ++cell) {
        double a = static_cast<double>(cell) / intervals_;
        double b = static_cast<double>(cell + 1) / intervals_;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            double x = mid + half * gl.nodes[q];
            double w = gl.weights[q] * half;
            int first;
            std::vector<std::vector<double>> ders;
            eval_all(x, deriv, first, ders);
            const auto& row = ders[static_cast<std::size_t>(deriv)];
            for (int i = 0; i <= degree_; ++i)
                for (int j = 0; j <= degree_; ++j)
                    G(first + i, first + j) +=
                        w * row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
        }
    }
    return G;
}

Eigen::VectorXd SplineBasis::integrals(int deriv) const {
    if (deriv > 0)
        return point_values(1.0, deriv - 1) - point_values(0.0, deriv - 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size_);
    const GaussLegendre& gl = gl16();
    for (int cell = 0; cell < intervals_; ++cell) {
        double a = static_cast<double>(cell) / intervals_;
        double b = static_cast<double>(cell + 1) / intervals_;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            double x = mid + half * gl.nodes[q];
            double w = gl.weights[q] * half;
            int first;
            std::vector<std::vector<double>> ders;
            eval_all(x, 0, first, ders);
            for (int j = 0; j <= degree_; ++j)
                v[first + j] += w * ders[0][static_cast<std::size_t>(j)];
        }
    }
    return v;
}

PiecewisePoly SplineBasis::to_piecewise(const Eigen::VectorXd& coeffs) const {
    if (coeffs.size() != size_)
        throw std::invalid_argument("spline basis: coefficient size mismatch");
    std::vector<double> breaks;
    for (int i = 0; i <= intervals_; ++i)
        breaks.push_back(static_cast<double>(i) / intervals_);
    std::vector<std::vector<double>> pieces;
    for (int cell = 0; cell < intervals_; ++cell) {
        double a = breaks[static_cast<std::size_t>(cell)];
        double b = breaks[static_cast<std::size_t>(cell + 1)];
        // Taylor coefficients at the cell midpoint (safely interior), then
        // re-expanded about the left edge.
        double x = 0.5 * (a + b);
        int first;
        std::vector<std::vector<double>> ders;
        eval_all(x, degree_, first, ders);
        std::vector<double> taylor(static_cast<std::size_t>(degree_ + 1), 0.0);
        double fact = 1.0;
        for (int k = 0; k <= degree_; ++k) {
            double val = 0.0;
            for (int j = 0; j <= degree_; ++j)
                val += coeffs[first + j] * ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            taylor[static_cast<std::size_t>(k)] = val / fact;
            fact *= static_cast<double>(k + 1);
        }
        double s = a - x;
        std::vector<double> at_a(taylor.size(), 0.0);
        for (std::size_t i = 0; i < taylor.size(); ++i) {
            double term = taylor[i];
            for (std::size_t j = i + 1; j-- > 0;) {
                at_a[j] += term;
                if (j > 0) term *= s * static_cast<double>(j) / static_cast<double>(i - j + 1);
            }
        }
        pieces.push_back(std::move(at_a));
    }
    return PiecewisePoly(breaks, pieces);
}

}  // namespace wqmc
