#include "wqmc/univariate_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wqmc/numeric.hpp"

namespace wqmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

const std::vector<double>& bernoulli_table(int n) {
    static std::mutex mtx;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, bernoulli_coeffs(n)).first;
    return it->second;
}

double bernoulli_eval(int n, double x) {
    const auto& c = bernoulli_table(n);
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

double anchored_k1(int r, double a, double x, double y) {
    double X = x - a, Y = y - a;
    bool same_side = X * Y > 0.0;
    double ax = std::abs(X), ay = std::abs(Y), m = std::min(ax, ay);
    if (r == 1) return same_side ? m : 0.0;
    // r == 2: linear jet part plus the iterated-integral part.
    double k = X * Y;
    if (same_side) k += ax * ay * m - 0.5 * (ax + ay) * m * m + m * m * m / 3.0;
    return k;
}

double anova_k1(int r, double x, double y) {
    double k = 0.0;
    for (int nu = 1; nu <= r; ++nu) {
        double f = factorial(nu);
        k += bernoulli_eval(nu, x) * bernoulli_eval(nu, y) / (f * f);
    }
    double sign = (r % 2 == 1) ? 1.0 : -1.0;
    k += sign * bernoulli_eval(2 * r, frac(x - y)) / factorial(2 * r);
    return k;
}

double korobov_k1(int r, double x, double y) {
    double sign = (r % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(kTwoPi, 2 * r) / factorial(2 * r) *
           bernoulli_eval(2 * r, frac(x - y));
}

double closed_form_k1(const UnivariateSpace& s, double x, double y) {
    switch (s.flavor) {
        case Flavor::Anchored: return anchored_k1(s.r, s.anchor, x, y);
        case Flavor::Anova: return anova_k1(s.r, x, y);
        case Flavor::Korobov: return korobov_k1(s.r, x, y);
        default:
            throw std::logic_error("no closed-form kernel for this flavor");
    }
}

// Exact integral of y -> k_1(x,y) for the anchored flavor, by Gauss
// quadrature on the polynomial pieces.
double anchored_mean(int r, double a, double x) {
    std::vector<double> cuts{0.0, 1.0, a, x};
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15) continue;
        acc += gl16().integrate([&](double y) { return anchored_k1(r, a, x, y); },
                                cuts[i], cuts[i + 1]);
    }
    return acc;
}

double anchored_double_integral(int r, double a) {
    std::vector<double> cuts{0.0, 1.0, a};
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15) continue;
        acc += gl16().integrate([&](double x) { return anchored_mean(r, a, x); },
                                cuts[i], cuts[i + 1]);
    }
    return acc;
}

// Truncated Fourier expansion of the periodic kernel; the workhorse oracle
// for the Korobov flavor.  Values are cached per distance because kernels on
// uniform grids revisit few distinct distances.
double korobov_truncated(int r, long long cutoff, double d) {
    KahanSum s;
    for (long long h = cutoff; h >= 1; --h)
        s.add(2.0 * std::cos(kTwoPi * static_cast<double>(h) * d) /
              std::pow(static_cast<double>(h), 2 * r));
    // Analytic tail at lag zero (monotone series); for nonzero lags the
    // oscillating tail is already below the rounding noise of the sum.
    if (std::abs(d) < 1e-15 || std::abs(d - 1.0) < 1e-15) {
        double H = static_cast<double>(cutoff);
        if (r == 1) s.add(2.0 * (1.0 / H - 0.5 / (H * H) + 1.0 / (6.0 * H * H * H)));
        else s.add(2.0 / (static_cast<double>(2 * r - 1) * std::pow(H, 2 * r - 1)));
    }
    return s.value();
}

}  // namespace

Flavor flavor_from_string(const std::string& name) {
    if (name == "standard") return Flavor::Standard;
    if (name == "anchored") return Flavor::Anchored;
    if (name == "anova") return Flavor::Anova;
    if (name == "korobov") return Flavor::Korobov;
    throw std::invalid_argument("unknown flavor: " + name);
}

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::Standard: return "standard";
        case Flavor::Anchored: return "anchored";
        case Flavor::Anova: return "anova";
        case Flavor::Korobov: return "korobov";
    }
    return "?";
}

void UnivariateSpace::validate() const {
    if (r < 1) throw std::invalid_argument("smoothness must be >= 1");
    if (flavor != Flavor::Korobov && r > 2)
        throw std::invalid_argument("sobolev flavors support smoothness 1 or 2");
    if (anchor < 0.0 || anchor > 1.0)
        throw std::invalid_argument("anchor must lie in [0,1]");
    if (galerkin_resolution < 4)
        throw std::invalid_argument("galerkin resolution too small");
}

double eval(const UnivariateFunction& f, double x) {
    return std::visit([x](const auto& g) { return g.eval(x); }, f);
}

double integral(const UnivariateFunction& f) {
    return std::visit([](const auto& g) { return g.integral(); }, f);
}

std::pair<double, double> seminorms(const UnivariateSpace& space,
                                    const UnivariateFunction& f) {
    space.validate();
    if (space.flavor == Flavor::Korobov) {
        const auto* fp = std::get_if<FourierPoly>(&f);
        if (!fp)
            throw std::invalid_argument("korobov seminorms need a trigonometric polynomial");
        double s1 = std::abs(fp->coeff(0).real());
        double s2sq = 0.0;
        for (int h = 1; h <= fp->max_index(); ++h)
            s2sq += 2.0 * std::norm(fp->coeff(h)) *
                    std::max(1.0, std::pow(static_cast<double>(h), 2 * space.r));
        return {s1, std::sqrt(s2sq)};
    }
    const auto* pp = std::get_if<PiecewisePoly>(&f);
    if (!pp)
        throw std::invalid_argument("sobolev seminorms need a piecewise polynomial");

    std::vector<PiecewisePoly> ders{*pp};
    for (int nu = 1; nu <= space.r; ++nu) ders.push_back(ders.back().derivative());

    double s1 = 0.0, s2sq = ders[static_cast<std::size_t>(space.r)].integral_of_square();
    switch (space.flavor) {
        case Flavor::Standard:
            s1 = std::sqrt(pp->integral_of_square());
            for (int nu = 1; nu < space.r; ++nu)
                s2sq += ders[static_cast<std::size_t>(nu)].integral_of_square();
            break;
        case Flavor::Anchored:
            s1 = std::abs(pp->eval(space.anchor));
            for (int nu = 1; nu < space.r; ++nu) {
                double v = ders[static_cast<std::size_t>(nu)].eval(space.anchor);
                s2sq += v * v;
            }
            break;
        case Flavor::Anova:
            s1 = std::abs(pp->integral());
            for (int nu = 1; nu < space.r; ++nu) {
                double v = ders[static_cast<std::size_t>(nu)].integral();
                s2sq += v * v;
            }
            break;
        default: break;
    }
    return {s1, std::sqrt(s2sq)};
}

double weighted_norm(const UnivariateSpace& space, const UnivariateFunction& f,
                     double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    auto [s1, s2] = seminorms(space, f);
    return std::sqrt(s1 * s1 + s2 * s2 / gamma);
}

double kernel_eval(const UnivariateSpace& space, double gamma, double x, double y) {
    space.validate();
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    if (space.flavor == Flavor::Standard)
        return galerkin_context(space, gamma)->kernel(x, y) - 1.0;
    return gamma * closed_form_k1(space, x, y);
}

double kernel_mean(const UnivariateSpace& space, double gamma, double x) {
    space.validate();
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    switch (space.flavor) {
        case Flavor::Standard:
            return galerkin_context(space, gamma)->mean(x) - 1.0;
        case Flavor::Anchored:
            return gamma * anchored_mean(space.r, space.anchor, x);
        case Flavor::Anova:
        case Flavor::Korobov:
            return 0.0;  // mean-free kernels
    }
    return 0.0;
}

double kernel_double_integral(const UnivariateSpace& space, double gamma) {
    space.validate();
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    switch (space.flavor) {
        case Flavor::Standard:
            return galerkin_context(space, gamma)->double_integral() - 1.0;
        case Flavor::Anchored:
            return gamma * anchored_double_integral(space.r, space.anchor);
        case Flavor::Anova:
        case Flavor::Korobov:
            return 0.0;
    }
    return 0.0;
}

Eigen::MatrixXd galerkin_kernel(const UnivariateSpace& space, double gamma,
                                const std::vector<double>& grid) {
    space.validate();
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
    const int n = static_cast<int>(grid.size());
    Eigen::MatrixXd K(n, n);
    if (space.flavor == Flavor::Korobov) {
        std::map<long long, double> by_lag;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double d = frac(grid[static_cast<std::size_t>(i)] -
                                grid[static_cast<std::size_t>(j)]);
                long long key = llround(d * 1e12);
                auto it = by_lag.find(key);
                if (it == by_lag.end())
                    it = by_lag.emplace(key, korobov_truncated(space.r,
                                                               space.galerkin_resolution, d))
                             .first;
                K(i, j) = K(j, i) = 1.0 + gamma * it->second;
            }
        return K;
    }
    auto ctx = galerkin_context(space, gamma);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            K(i, j) = K(j, i) = ctx->kernel(grid[static_cast<std::size_t>(i)],
                                            grid[static_cast<std::size_t>(j)]);
    return K;
}

SeminormGrams seminorm_grams(const UnivariateSpace& space, int resolution) {
    space.validate();
    if (space.flavor == Flavor::Korobov)
        throw std::invalid_argument("korobov flavor has no spline gram representation");
    int degree = std::max(space.r, 3);
    auto basis = std::make_shared<SplineBasis>(degree, resolution, space.r - 1);

    SeminormGrams g;
    g.basis = basis;
    g.G2 = basis->gram(space.r);
    switch (space.flavor) {
        case Flavor::Standard:
            g.G1 = basis->gram(0);
            g.ell1 = basis->integrals(0);  // <f,1> in the L2 sense
            for (int nu = 1; nu < space.r; ++nu) g.G2 += basis->gram(nu);
            break;
        case Flavor::Anchored:
            g.ell1 = basis->point_values(space.anchor, 0);
            g.G1 = g.ell1 * g.ell1.transpose();
            for (int nu = 1; nu < space.r; ++nu) {
                Eigen::VectorXd v = basis->point_values(space.anchor, nu);
                g.G2 += v * v.transpose();
            }
            break;
        case Flavor::Anova:
            g.ell1 = basis->integrals(0);
            g.G1 = g.ell1 * g.ell1.transpose();
            for (int nu = 1; nu < space.r; ++nu) {
                Eigen::VectorXd v = basis->integrals(nu);
                g.G2 += v * v.transpose();
            }
            break;
        default: break;
    }
    return g;
}

GalerkinContext::GalerkinContext(const UnivariateSpace& space, double gamma) {
    // For r = 2 the stiffness entries grow like h^-3 and their rounding is
    // amplified through the solve, while the smooth kernels are already
    // resolved on a coarse partition; accuracy peaks around 32 cells.
    int resolution = space.galerkin_resolution;
    if (space.r >= 2) resolution = std::min(resolution, 32);
    grams_ = seminorm_grams(space, resolution);
    A_ = grams_.G1 + grams_.G2 / gamma;
    solver_.compute(A_);
    if (solver_.info() != Eigen::Success)
        throw std::runtime_error("galerkin system factorization failed");
    Eigen::VectorXd b = grams_.basis->integrals(0);
    mean_coeffs_ = solve(b);
    dd_ = b.dot(mean_coeffs_);
}

Eigen::VectorXd GalerkinContext::solve(const Eigen::VectorXd& rhs) const {
    // The mixed derivative orders make these systems stiff; a couple of
    // refinement sweeps recover the digits the factorization loses.
    Eigen::VectorXd x = solver_.solve(rhs);
    for (int sweep = 0; sweep < 2; ++sweep) {
        Eigen::VectorXd resid = rhs - A_ * x;
        x += solver_.solve(resid);
    }
    return x;
}

double GalerkinContext::kernel(double x, double y) const {
    Eigen::VectorXd px = grams_.basis->point_values(x, 0);
    Eigen::VectorXd py = grams_.basis->point_values(y, 0);
    return px.dot(solve(py));
}

double GalerkinContext::mean(double x) const {
    Eigen::VectorXd px = grams_.basis->point_values(x, 0);
    return px.dot(mean_coeffs_);
}

double GalerkinContext::double_integral() const { return dd_; }

std::shared_ptr<const GalerkinContext> galerkin_context(const UnivariateSpace& space,
                                                        double gamma) {
    using Key = std::tuple<int, int, double, int, double>;
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const GalerkinContext>> cache;
    Key key{static_cast<int>(space.flavor), space.r, space.anchor,
            space.galerkin_resolution, gamma};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() > 24) cache.clear();
    auto ctx = std::make_shared<const GalerkinContext>(space, gamma);
    cache.emplace(key, ctx);
    return ctx;
}

std::pair<double, double> equivalence_constant(const UnivariateSpace& space_i,
                                               const UnivariateSpace& space_ii) {
    space_i.validate();
    space_ii.validate();
    if (space_i.r != space_ii.r)
        throw std::invalid_argument("equivalence constant needs equal smoothness");
    bool kor_i = space_i.flavor == Flavor::Korobov;
    bool kor_ii = space_ii.flavor == Flavor::Korobov;
    if (kor_i != kor_ii)
        throw std::invalid_argument(
            "periodic and non-periodic flavors act on different spaces");
    if (kor_i) {
        // Identical seminorm pairs: the optimal constant is 1.
        return {1.0, 0.5};
    }
    if (space_i.flavor == space_ii.flavor &&
        (space_i.flavor != Flavor::Anchored || space_i.anchor == space_ii.anchor)) {
        return {1.0, 0.5};
    }

    int resolution = std::min(256, std::max(space_i.galerkin_resolution,
                                            space_ii.galerkin_resolution));
    SeminormGrams gi = seminorm_grams(space_i, resolution);
    SeminormGrams gii = seminorm_grams(space_ii, resolution);

    auto lambda_max = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B,
                                                                     Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("generalized eigensolve failed");
        return es.eigenvalues().maxCoeff();
    };

    Eigen::MatrixXd Ni = gi.G1 + gi.G2;
    Eigen::MatrixXd Nii = gii.G1 + gii.G2;

    double c_sq = 1.0;
    // ||f||_{H,P} <= c (|<f,1>_{1,P}| + |f|_{2,P}); via the quadratic
    // relaxation u + v >= sqrt(u^2 + v^2) this is implied by the generalized
    // eigenvalue of (N_P, ell ell^T + G2_P).  For the functional flavors the
    // relaxed problem is the identity, so only the integral flavor needs it.
    if (space_i.flavor == Flavor::Standard)
        c_sq = std::max(c_sq, lambda_max(Ni, gi.ell1 * gi.ell1.transpose() + gi.G2));
    if (space_ii.flavor == Flavor::Standard)
        c_sq = std::max(c_sq, lambda_max(Nii, gii.ell1 * gii.ell1.transpose() + gii.G2));
    // ||f||_{H,I} <= c ||f||_{H,II}
    c_sq = std::max(c_sq, lambda_max(Ni, Nii));

    double c = std::sqrt(c_sq) * 1.05;
    return {c, 1.0 / (2.0 * c * c * c * c)};
}

PiecewisePoly random_spline(int r, int cells, std::uint64_t seed) {
    int degree = std::max(r, 3);
    SplineBasis basis(degree, cells, degree - 1);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::VectorXd coeffs(basis.size());
    for (int i = 0; i < basis.size(); ++i) coeffs[i] = unif(gen);
    return basis.to_piecewise(coeffs);
}

FourierPoly random_trig_poly(int r, int max_index, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(max_index) + 1);
    coeffs[0] = {unif(gen), 0.0};
    for (int h = 1; h <= max_index; ++h) {
        double scale = std::pow(static_cast<double>(h), -static_cast<double>(r) - 0.5);
        coeffs[static_cast<std::size_t>(h)] = {scale * unif(gen), scale * unif(gen)};
    }
    return FourierPoly(std::move(coeffs));
}

}  // namespace wqmc
