#include "wqmc/tensor_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wqmc/numeric.hpp"

namespace wqmc {

ProductKernel::ProductKernel(UnivariateSpace space, WeightSequence weights, int s,
                             double truncation_tol)
    : space_(space), weights_(std::move(weights)), s_(s),
      truncation_tol_(truncation_tol) {
    space_.validate();
    if (s_ != kInfinite && s_ < 1)
        throw std::invalid_argument("product kernel: dimension must be >= 1");
    if (s_ == kInfinite && !weights_.summable())
        throw std::invalid_argument(
            "product kernel: infinite dimension needs summable weights");
    if (!(truncation_tol_ > 0.0))
        throw std::invalid_argument("product kernel: bad truncation tolerance");
}

double ProductKernel::factor(int j, double x, double y) const {
    return 1.0 + kernel_eval(space_, gamma(j), x, y);
}

double ProductKernel::factor_mean(int j, double x) const {
    return 1.0 + kernel_mean(space_, gamma(j), x);
}

double ProductKernel::factor_double_integral(int j) const {
    return 1.0 + kernel_double_integral(space_, gamma(j));
}

double ProductKernel::eval(std::span<const double> x, std::span<const double> y) const {
    if (infinite())
        throw std::invalid_argument("product kernel: infinite kernel needs tail points");
    if (static_cast<int>(x.size()) != s_ || static_cast<int>(y.size()) != s_)
        throw std::invalid_argument("product kernel: dimension mismatch");
    double prod = 1.0;
    for (int j = 1; j <= s_; ++j)
        prod *= factor(j, x[static_cast<std::size_t>(j - 1)],
                       y[static_cast<std::size_t>(j - 1)]);
    return prod;
}

double ProductKernel::eval(const TailPoint& x, const TailPoint& y) const {
    if (!infinite()) {
        if (static_cast<int>(x.prefix.size()) > s_ ||
            static_cast<int>(y.prefix.size()) > s_)
            throw std::invalid_argument("product kernel: prefix exceeds dimension");
        double prod = 1.0;
        for (int j = 1; j <= s_; ++j) {
            double xj = j <= static_cast<int>(x.prefix.size())
                            ? x.prefix[static_cast<std::size_t>(j - 1)] : x.tail;
            double yj = j <= static_cast<int>(y.prefix.size())
                            ? y.prefix[static_cast<std::size_t>(j - 1)] : y.tail;
            prod *= factor(j, xj, yj);
        }
        return prod;
    }
    // Membership in the natural domain: the diagonal products
    // prod (1 + gamma_j k(t,t)) must converge, which for constant tails
    // reduces to summable weights (guaranteed) and a finite diagonal value.
    int m = static_cast<int>(std::max(x.prefix.size(), y.prefix.size()));
    double prod = 1.0;
    for (int j = 1; j <= m; ++j) {
        double xj = j <= static_cast<int>(x.prefix.size())
                        ? x.prefix[static_cast<std::size_t>(j - 1)] : x.tail;
        double yj = j <= static_cast<int>(y.prefix.size())
                        ? y.prefix[static_cast<std::size_t>(j - 1)] : y.tail;
        prod *= factor(j, xj, yj);
    }
    double cross = kernel_eval(space_, 1.0, x.tail, y.tail);
    if (std::abs(cross) < 1e-300) return prod;
    // Remaining factors 1 + gamma_j * k(tx,ty); truncate when the log tail
    // bound drops below tolerance.
    double decay = weights_.decay();
    for (int j = m + 1;; ++j) {
        double g = gamma(j);
        prod *= 1.0 + g * cross;
        double tail_bound = std::abs(cross) * g *
                            (std::isinf(decay) ? 1.0 : static_cast<double>(j) / (decay - 1.0));
        if (tail_bound < truncation_tol_) break;
        if (j > 100000000)
            throw std::runtime_error("product kernel: truncation did not converge");
    }
    return prod;
}

double ProductKernel::integration_norm() const {
    if (!infinite()) {
        double prod = 1.0;
        for (int j = 1; j <= s_; ++j) prod *= factor_double_integral(j);
        return std::sqrt(prod);
    }
    double dd1 = kernel_double_integral(space_, 1.0);
    double log_prod = 0.0;
    double decay = weights_.decay();
    for (int j = 1;; ++j) {
        double g = gamma(j);
        log_prod += std::log1p(space_.gamma_homogeneous()
                                   ? g * dd1
                                   : kernel_double_integral(space_, g));
        double tail_bound = std::abs(dd1) * g *
                            (std::isinf(decay) ? 1.0 : static_cast<double>(j) / (decay - 1.0));
        if (tail_bound < truncation_tol_ || j > 100000000) break;
    }
    return std::exp(0.5 * log_prod);
}

ProductFunction::ProductFunction(std::vector<UnivariateFunction> factors)
    : factors_(std::move(factors)) {}

const UnivariateFunction& ProductFunction::factor(int j) const {
    if (j < 1 || j > active_dims())
        throw std::out_of_range("product function: factor index");
    return factors_[static_cast<std::size_t>(j - 1)];
}

double ProductFunction::eval(std::span<const double> x) const {
    double prod = 1.0;
    for (int j = 1; j <= active_dims() && j <= static_cast<int>(x.size()); ++j)
        prod *= wqmc::eval(factors_[static_cast<std::size_t>(j - 1)],
                           x[static_cast<std::size_t>(j - 1)]);
    return prod;
}

double ProductFunction::eval(const TailPoint& x) const {
    double prod = 1.0;
    for (int j = 1; j <= active_dims(); ++j) {
        double xj = j <= static_cast<int>(x.prefix.size())
                        ? x.prefix[static_cast<std::size_t>(j - 1)] : x.tail;
        prod *= wqmc::eval(factors_[static_cast<std::size_t>(j - 1)], xj);
    }
    return prod;
}

double integrate_exact(const ProductFunction& f) {
    double prod = 1.0;
    for (int j = 1; j <= f.active_dims(); ++j) prod *= integral(f.factor(j));
    return prod;
}

GramSystem::GramSystem(const ProductKernel& kernel,
                       std::vector<std::vector<double>> points)
    : points_(std::move(points)) {
    const int n = static_cast<int>(points_.size());
    if (n == 0) throw std::invalid_argument("gram system: no points");
    G_.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l <= i; ++l)
            G_(i, l) = G_(l, i) =
                kernel.eval(points_[static_cast<std::size_t>(i)],
                            points_[static_cast<std::size_t>(l)]);

    double base_jitter = 1e-12 * G_.trace() / n;
    double jitter = 0.0;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::MatrixXd A = G_;
        if (jitter > 0.0) A.diagonal().array() += jitter;
        solver_.compute(A);
        if (solver_.info() == Eigen::Success && solver_.isPositive()) return;
        jitter = (jitter == 0.0) ? base_jitter : jitter * 100.0;
    }
    throw std::runtime_error("gram system: factorization failed after jitter escalation");
}

Eigen::VectorXd GramSystem::solve(const Eigen::VectorXd& rhs) const {
    return solver_.solve(rhs);
}

double GramSystem::quadratic_inverse_form(const Eigen::VectorXd& v) const {
    return v.dot(solver_.solve(v));
}

double rkhs_norm(const ProductKernel& kernel,
                 const std::vector<std::vector<double>>& points,
                 const std::vector<double>& values) {
    if (points.size() != values.size())
        throw std::invalid_argument("rkhs norm: points/values size mismatch");
    GramSystem sys(kernel, points);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    double q = sys.quadratic_inverse_form(v);
    return std::sqrt(std::max(0.0, q));
}

namespace {

// xi(f) for the homogeneous flavors: the functional whose kernel part
// vanishes (point value, mean, or zero-frequency coefficient).
double xi_functional(const UnivariateSpace& space, const UnivariateFunction& f) {
    switch (space.flavor) {
        case Flavor::Anchored: return eval(f, space.anchor);
        case Flavor::Anova: return integral(f);
        case Flavor::Korobov: return std::get<FourierPoly>(f).coeff(0).real();
        default:
            throw std::invalid_argument("decompose: standard flavor has no xi-split");
    }
}

}  // namespace

std::map<std::vector<int>, double> decompose(const ProductKernel& kernel,
                                             const ProductFunction& f) {
    if (!kernel.space().gamma_homogeneous())
        throw std::invalid_argument("decompose: requires a homogeneous flavor");
    int s = f.active_dims();
    if (kernel.dims() != ProductKernel::kInfinite && s > kernel.dims())
        throw std::invalid_argument("decompose: function has more active dims than kernel");
    if (s > 20) throw std::invalid_argument("decompose: too many active dimensions");

    // Per-factor split f_j = c_j + g_j with xi(g_j) = 0; the component norm
    // in H(k_u) multiplies |g_j|_2 over u and |c_j| elsewhere.
    std::vector<double> c(static_cast<std::size_t>(s));
    std::vector<double> gnorm(static_cast<std::size_t>(s));
    double fnorm_sq = 1.0;
    for (int j = 1; j <= s; ++j) {
        const auto& fj = f.factor(j);
        double cj = xi_functional(kernel.space(), fj);
        auto [s1, s2] = seminorms(kernel.space(), fj);
        (void)s1;
        c[static_cast<std::size_t>(j - 1)] = cj;
        gnorm[static_cast<std::size_t>(j - 1)] = s2;  // |f_j|_2 = |g_j|_2
        fnorm_sq *= cj * cj + s2 * s2 / kernel.gamma(j);
    }

    std::map<std::vector<int>, double> comps;
    double parseval = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
        std::vector<int> u;
        double norm = 1.0, gamma_u = 1.0;
        for (int j = 1; j <= s; ++j) {
            if (mask & (1u << (j - 1))) {
                u.push_back(j);
                norm *= gnorm[static_cast<std::size_t>(j - 1)];
                gamma_u *= kernel.gamma(j);
            } else {
                norm *= std::abs(c[static_cast<std::size_t>(j - 1)]);
            }
        }
        comps.emplace(std::move(u), norm);
        parseval += norm * norm / gamma_u;
    }
    if (std::abs(parseval - fnorm_sq) > 1e-6 * std::max(1.0, fnorm_sq))
        throw std::runtime_error("decompose: parseval identity violated");
    return comps;
}

IsometryCheck cylinder_isometry_check(const ProductKernel& kernel,
                                      const std::vector<std::vector<double>>& points,
                                      const std::vector<double>& values,
                                      int truncation_level, double tail_value,
                                      double tol) {
    if (kernel.infinite())
        throw std::invalid_argument("isometry check: base kernel must be finite-dimensional");
    int s = kernel.dims();
    if (truncation_level < s)
        throw std::invalid_argument("isometry check: truncation level below dimension");

    double base = rkhs_norm(kernel, points, values);

    ProductKernel padded_kernel(kernel.space(), kernel.weights(), truncation_level);
    std::vector<std::vector<double>> padded;
    for (const auto& p : points) {
        std::vector<double> q = p;
        q.resize(static_cast<std::size_t>(truncation_level), tail_value);
        padded.push_back(std::move(q));
    }
    double lifted = rkhs_norm(padded_kernel, padded, values);

    double rel = std::abs(lifted - base) / std::max(base, 1e-300);
    return {rel <= tol, rel, base, lifted};
}

L1Check l1_embedding_check(const ProductKernel& kernel, int trials,
                           std::uint64_t seed) {
    if (kernel.infinite() || kernel.dims() > 3)
        throw std::invalid_argument("l1 check: supported for s <= 3");
    const int s = kernel.dims();

    // Univariate embedding norm estimates ||i_j||: largest observed
    // int|f| / ||f|| over random one-dimensional interpolants.
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto univariate_ratio = [&](int dim_index, std::mt19937_64& g) {
        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        for (int i = 0; i < 5; ++i) {
            pts.push_back({unif(g)});
            vals.push_back(gauss(g));
        }
        UnivariateSpace sp = kernel.space();
        double gamma = kernel.gamma(dim_index);
        // Min-norm interpolant f = sum c_i (1+k)(x_i, .) in the coordinate's
        // own weighted space.
        Eigen::MatrixXd G(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int l = 0; l < 5; ++l)
                G(i, l) = 1.0 + kernel_eval(sp, gamma, pts[static_cast<std::size_t>(i)][0],
                                            pts[static_cast<std::size_t>(l)][0]);
        Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), 5);
        Eigen::VectorXd coef = G.ldlt().solve(v);
        double norm = std::sqrt(std::max(0.0, v.dot(coef)));
        // int |f| by composite quadrature on a fine partition.
        double l1 = 0.0;
        const int panels = 2048;
        for (int p = 0; p < panels; ++p) {
            double x = (p + 0.5) / panels;
            double fx = 0.0;
            for (int i = 0; i < 5; ++i)
                fx += coef[i] * (1.0 + kernel_eval(sp, gamma,
                                                   pts[static_cast<std::size_t>(i)][0], x));
            l1 += std::abs(fx) / panels;
        }
        return norm > 0.0 ? l1 / norm : 0.0;
    };

    double bound = std::pow(std::numbers::pi / 2.0, 0.5 * (s - 1));
    for (int j = 1; j <= s; ++j) {
        // The constant function has ||1|| = 1 in every homogeneous flavor and
        // int |1| = 1, so each ||i_j|| is at least 1; random interpolants miss
        // that witness, so it seeds the maximization.
        double best = 1.0;
        std::mt19937_64 g(seed + 1000003ULL * static_cast<std::uint64_t>(j));
        for (int t = 0; t < 256; ++t) best = std::max(best, univariate_ratio(j, g));
        bound *= best;
    }

    // Multivariate trials: random interpolants, Monte Carlo L1 estimate.
    double max_ratio = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int npts = 5;
        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        for (int i = 0; i < npts; ++i) {
            std::vector<double> p;
            for (int j = 0; j < s; ++j) p.push_back(unif(gen));
            pts.push_back(std::move(p));
            vals.push_back(gauss(gen));
        }
        GramSystem sys(kernel, pts);
        Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), npts);
        Eigen::VectorXd coef = sys.solve(v);
        double norm = std::sqrt(std::max(0.0, v.dot(coef)));
        if (norm <= 0.0) continue;

        const int mc = 100000;
        KahanSum acc;
        std::vector<double> x(static_cast<std::size_t>(s));
        for (int m = 0; m < mc; ++m) {
            for (int j = 0; j < s; ++j) x[static_cast<std::size_t>(j)] = unif(gen);
            double fx = 0.0;
            for (int i = 0; i < npts; ++i)
                fx += coef[i] * kernel.eval(pts[static_cast<std::size_t>(i)], x);
            acc.add(std::abs(fx));
        }
        max_ratio = std::max(max_ratio, acc.value() / mc / norm);
    }
    return {max_ratio, bound};
}

}  // namespace wqmc
