#include "wqmc/wce.hpp"

#include <cmath>
#include <stdexcept>

namespace wqmc {

double wce(const QuadratureRule& rule, const ProductKernel& kernel) {
    rule.validate();
    if (kernel.infinite())
        throw std::invalid_argument("wce: kernel must be finite-dimensional");
    if (kernel.dims() != rule.s)
        throw std::invalid_argument("wce: rule/kernel dimension mismatch");
    const int n = rule.n();
    const int s = rule.s;

    double dd = 1.0;
    for (int j = 1; j <= s; ++j) dd *= kernel.factor_double_integral(j);

    long double mean_term = 0.0L;
    for (int i = 0; i < n; ++i) {
        double mi = 1.0;
        for (int j = 1; j <= s; ++j)
            mi *= kernel.factor_mean(j, rule.nodes[static_cast<std::size_t>(i)]
                                            [static_cast<std::size_t>(j - 1)]);
        mean_term += static_cast<long double>(rule.weights[static_cast<std::size_t>(i)]) * mi;
    }

    long double quad_term = 0.0L;
    for (int i = 0; i < n; ++i) {
        const auto& ti = rule.nodes[static_cast<std::size_t>(i)];
        double wi = rule.weights[static_cast<std::size_t>(i)];
        double row = 0.0;
        // Symmetric: strictly-upper entries counted twice.
        for (int l = i + 1; l < n; ++l) {
            const auto& tl = rule.nodes[static_cast<std::size_t>(l)];
            row += rule.weights[static_cast<std::size_t>(l)] * kernel.eval(ti, tl);
        }
        quad_term += static_cast<long double>(wi) *
                     (2.0L * row + static_cast<long double>(wi) * kernel.eval(ti, ti));
    }

    long double e2 = static_cast<long double>(dd) - 2.0L * mean_term + quad_term;
    if (e2 < -1e-10L) throw std::runtime_error("wce: negative squared error");
    if (e2 < 0.0L) e2 = 0.0L;
    return std::sqrt(static_cast<double>(e2));
}

}  // namespace wqmc
