#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wqmc {

// Fractional part mapped to [0,1).
inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

// Coefficients of the Bernoulli polynomial B_n in the monomial basis,
// lowest degree first.  B_0 = 1, B_1 = x - 1/2, B_2 = x^2 - x + 1/6, ...
std::vector<double> bernoulli_coeffs(int n);

// Evaluate B_n(x).
double bernoulli_poly(int n, double x);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);

    // Integrate f over [a,b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * f(mid + half * nodes[i]);
        return acc * half;
    }
};

// Shared fixed-order rule for exact integration of moderate-degree pieces.
const GaussLegendre& gl16();

// Kahan-compensated accumulator for long sums.
struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace wqmc
