#include "wqmc/cbc.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wqmc/numeric.hpp"
#include "wqmc/univariate_space.hpp"
#include "wqmc/wce.hpp"

namespace wqmc {

namespace {

// Inline kernel evaluators for the hot candidate loop; the generic
// kernel_eval dispatch is far too slow at ~1e10 calls per construction.
// Each functor returns the *weighted* kernel k_gamma(x,y) for its coordinate.

struct AnchoredR1Kernel {
    double a;
    double gamma;
    double operator()(double x, double y) const {
        double X = x - a, Y = y - a;
        if ((X >= 0.0) != (Y >= 0.0)) return 0.0;
        return gamma * std::min(std::fabs(X), std::fabs(Y));
    }
};

struct AnchoredR2Kernel {
    double a;
    double gamma;
    double operator()(double x, double y) const {
        double X = x - a, Y = y - a;
        double v = X * Y;
        if ((X >= 0.0) == (Y >= 0.0)) {
            double ax = std::fabs(X), ay = std::fabs(Y);
            double mn = std::min(ax, ay);
            v += ax * ay * mn - (ax + ay) * mn * mn / 2.0 + mn * mn * mn / 3.0;
        }
        return gamma * v;
    }
};

// Mean-anchored and periodic kernels: Bernoulli-polynomial closed forms with
// precomputed monomial coefficients.
struct AnovaKernel {
    int r = 1;
    double gamma = 1.0;
    std::vector<std::vector<double>> bern;  // B_1..B_r monomial coeffs
    std::vector<double> inv_fact_sq;        // 1/(v!)^2 for v = 1..r
    std::vector<double> b2r;                // B_{2r} coeffs
    double tail_scale;                      // (-1)^{r+1} / (2r)!

    static double horner(const std::vector<double>& c, double x) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    }
    double operator()(double x, double y) const {
        double v = 0.0;
        for (int nu = 1; nu <= r; ++nu)
            v += inv_fact_sq[static_cast<std::size_t>(nu - 1)] *
                 horner(bern[static_cast<std::size_t>(nu - 1)], x) *
                 horner(bern[static_cast<std::size_t>(nu - 1)], y);
        double d = x - y;
        d -= std::floor(d);
        return gamma * (v + tail_scale * horner(b2r, d));
    }
};

struct KorobovKernel {
    double gamma = 1.0;
    std::vector<double> b2r;
    double scale;  // (-1)^{r+1} (2pi)^{2r} / (2r)!
    double operator()(double x, double y) const {
        double d = x - y;
        d -= std::floor(d);
        return gamma * scale * AnovaKernel::horner(b2r, d);
    }
};

// Standard flavor: k_gamma values tabulated on the 1/n grid (non-interlaced
// lattice coordinates are exact multiples of 1/n).
struct TabulatedKernel {
    const double* table;
    int n;
    double operator()(double x, double y) const {
        auto idx = [this](double v) {
            return static_cast<std::size_t>(std::llround(v * n));
        };
        return table[idx(x) * static_cast<std::size_t>(n) + idx(y)];
    }
};

// Cache of 1 + kernel_mean(space, gamma, x) per distinct coordinate value;
// lattice coordinates repeat heavily across candidates.
class MeanCache {
public:
    MeanCache(const UnivariateSpace& space, double gamma)
        : space_(space), gamma_(gamma) {}

    double operator()(double x) {
        std::uint64_t key = std::bit_cast<std::uint64_t>(x);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        double v = 1.0 + kernel_mean(space_, gamma_, x);
        cache_.emplace(key, v);
        return v;
    }

private:
    UnivariateSpace space_;
    double gamma_;
    std::unordered_map<std::uint64_t, double> cache_;
};

// Interlaced placement of one component: digit i of x lands at output digit
// c + (i-1) r (1-based), i.e. the value sum_i digit_i(x) b^{-(c+(i-1)r)}.
double place_component(double x, int c, int r, int b, int m_digits) {
    if (r == 1) return x;
    double v = 0.0;
    double place = std::pow(static_cast<double>(b), -static_cast<double>(c));
    double step = std::pow(static_cast<double>(b), -static_cast<double>(r));
    for (int i = 0; i < m_digits; ++i) {
        x *= b;
        int digit = static_cast<int>(std::floor(x));
        if (digit >= b) digit = b - 1;
        x -= digit;
        v += digit * place;
        place *= step;
    }
    return v;
}

// Factory: produces the weighted kernel functor for each output coordinate.
template <class KFactory>
PolynomialLattice cbc_impl(int b, int m, int s, const ProductKernel& kernel,
                           int interlace_r, KFactory&& factory) {
    const GFPoly p = irreducible_poly(b, m);
    PolynomialLattice L;
    L.b = b;
    L.m = m;
    L.modulus = p;
    L.interlace_r = interlace_r;

    const std::uint64_t n64 = L.n();
    const int n = static_cast<int>(n64);

    // Laurent value of every residue g/p (deg g < m): the lattice coordinate
    // for internal dimension j at index h is T[h(z) q_j(z) mod p].
    std::vector<double> T(n64);
    {
        PolynomialLattice probe = L;
        probe.q = {GFPoly::one(b)};
        for (std::uint64_t g = 0; g < n64; ++g)
            T[g] = digits_to_unit(point_digits(probe, g, 1), b);
    }

    // State over completed output coordinates.
    std::vector<double> Mpre(n64, 1.0);
    std::vector<double> P(n64 * n64, 1.0);
    long double DD = 1.0L;

    // Partially built block of the current output coordinate.
    std::vector<double> block_base(n64, 0.0);

    std::vector<double> x_cand(n64), z_cand(n64), z_best(n64);
    std::vector<std::uint64_t> basis(static_cast<std::size_t>(m));

    const int total_dims = interlace_r * s;
    for (int jdim = 1; jdim <= total_dims; ++jdim) {
        const int out_coord = (jdim - 1) / interlace_r + 1;
        const int cidx = (jdim - 1) % interlace_r;  // component within block
        const double gamma = kernel.gamma(out_coord);
        const double dd_factor = kernel.factor_double_integral(out_coord);
        MeanCache mfac(kernel.space(), gamma);
        const auto kf = factory(out_coord);

        double best_e2 = std::numeric_limits<double>::infinity();
        std::uint64_t best_q = 0;

        // For an irreducible modulus every nonzero q_1 induces the same point
        // multiset (h -> h q mod p is a bijection), so the first internal
        // dimension needs no search.
        const std::uint64_t q_hi = jdim == 1 ? 2 : n64;

        for (std::uint64_t q_enc = 1; q_enc < q_hi; ++q_enc) {
            GFPoly q(b, q_enc);
            for (int k = 0; k < m; ++k)
                basis[static_cast<std::size_t>(k)] =
                    ((GFPoly::monomial(b, k) * q) % p).encoding();

            // Residues h*q mod p for all h, then coordinate values.
            for (std::uint64_t h = 0; h < n64; ++h) {
                GFPoly g = GFPoly::zero(b);
                std::uint64_t hh = h;
                for (int k = 0; k < m && hh != 0; ++k) {
                    int digit = static_cast<int>(hh % static_cast<std::uint64_t>(b));
                    hh /= static_cast<std::uint64_t>(b);
                    for (int rep = 0; rep < digit; ++rep)
                        g = g + GFPoly(b, basis[static_cast<std::size_t>(k)]);
                }
                x_cand[h] = T[g.encoding()];
            }
            for (std::uint64_t h = 0; h < n64; ++h)
                z_cand[h] = block_base[h] +
                            place_component(x_cand[h], cidx + 1, interlace_r, b, m);

            long double mean_term = 0.0L;
            for (std::uint64_t i = 0; i < n64; ++i)
                mean_term += static_cast<long double>(Mpre[i]) * mfac(z_cand[i]);

            long double quad = 0.0L;
            const double* z = z_cand.data();
            for (std::uint64_t i = 0; i < n64; ++i) {
                const double* Pi = &P[i * n64];
                const double zi = z[i];
                double row = 0.0;
                for (std::uint64_t l = i + 1; l < n64; ++l)
                    row += Pi[l] * (1.0 + kf(zi, z[l]));
                quad += 2.0L * row +
                        static_cast<long double>(Pi[i]) * (1.0 + kf(zi, zi));
            }

            const long double nn = static_cast<long double>(n) * n;
            long double e2 = DD * dd_factor - 2.0L * mean_term / n + quad / nn;
            if (static_cast<double>(e2) < best_e2) {
                best_e2 = static_cast<double>(e2);
                best_q = q_enc;
                z_best = z_cand;
            }
        }

        L.q.push_back(GFPoly(b, best_q));
        block_base = z_best;  // accumulated digits of the partial coordinate

        if (cidx == interlace_r - 1) {
            // Block complete: fold the finished coordinate into the state.
            for (std::uint64_t i = 0; i < n64; ++i) Mpre[i] *= mfac(z_best[i]);
            for (std::uint64_t i = 0; i < n64; ++i) {
                double* Pi = &P[i * n64];
                const double zi = z_best[i];
                for (std::uint64_t l = i; l < n64; ++l)
                    Pi[l] *= 1.0 + kf(zi, z_best[l]);
            }
            // Mirror the updated upper triangle.
            for (std::uint64_t i = 0; i < n64; ++i)
                for (std::uint64_t l = 0; l < i; ++l) P[i * n64 + l] = P[l * n64 + i];
            DD *= dd_factor;
            std::fill(block_base.begin(), block_base.end(), 0.0);
        }
    }
    L.validate();
    return L;
}

std::vector<double> standard_kernel_table(const UnivariateSpace& space, double gamma,
                                          int n) {
    // k_gamma on the 1/n grid via the Galerkin evaluator.
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) grid[static_cast<std::size_t>(v)] = v / static_cast<double>(n);
    Eigen::MatrixXd K = galerkin_kernel(space, gamma, grid);
    std::vector<double> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            table[static_cast<std::size_t>(v) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(w)] = K(v, w) - 1.0;
    return table;
}

}  // namespace

PolynomialLattice cbc_construct(int b, int m, int s, const ProductKernel& kernel,
                                int interlace_r) {
    if (b != 2 && b != 3) throw std::invalid_argument("cbc: base must be 2 or 3");
    if (m < 1) throw std::invalid_argument("cbc: m must be >= 1");
    if (s < 1) throw std::invalid_argument("cbc: dimension must be >= 1");
    if (interlace_r < 1) throw std::invalid_argument("cbc: interlace factor must be >= 1");
    if (!kernel.infinite() && kernel.dims() < s)
        throw std::invalid_argument("cbc: kernel has fewer coordinates than requested");
    std::uint64_t n = 1;
    for (int i = 0; i < m; ++i) n *= static_cast<std::uint64_t>(b);
    if (n > 8192)
        throw std::invalid_argument("cbc: n = b^m above the supported search size");

    const UnivariateSpace& sp = kernel.space();
    switch (sp.flavor) {
        case Flavor::Anchored:
            if (sp.r == 1)
                return cbc_impl(b, m, s, kernel, interlace_r, [&](int j) {
                    return AnchoredR1Kernel{sp.anchor, kernel.gamma(j)};
                });
            if (sp.r == 2)
                return cbc_impl(b, m, s, kernel, interlace_r, [&](int j) {
                    return AnchoredR2Kernel{sp.anchor, kernel.gamma(j)};
                });
            throw std::invalid_argument("cbc: anchored flavor supported for r <= 2");
        case Flavor::Anova: {
            if (sp.r > 4) throw std::invalid_argument("cbc: anova flavor supported for r <= 4");
            AnovaKernel kf;
            kf.r = sp.r;
            double fact = 1.0;
            for (int nu = 1; nu <= sp.r; ++nu) {
                kf.bern.push_back(bernoulli_coeffs(nu));
                fact *= nu;
                kf.inv_fact_sq.push_back(1.0 / (fact * fact));
            }
            kf.b2r = bernoulli_coeffs(2 * sp.r);
            double fact2r = 1.0;
            for (int i = 2; i <= 2 * sp.r; ++i) fact2r *= i;
            kf.tail_scale = (sp.r % 2 == 1 ? 1.0 : -1.0) / fact2r;
            return cbc_impl(b, m, s, kernel, interlace_r, [&, kf](int j) {
                AnovaKernel out = kf;
                out.gamma = kernel.gamma(j);
                return out;
            });
        }
        case Flavor::Korobov: {
            if (sp.r > 4) throw std::invalid_argument("cbc: periodic flavor supported for r <= 4");
            KorobovKernel kf;
            kf.b2r = bernoulli_coeffs(2 * sp.r);
            double fact2r = 1.0;
            for (int i = 2; i <= 2 * sp.r; ++i) fact2r *= i;
            double two_pi_2r = std::pow(2.0 * std::numbers::pi, 2.0 * sp.r);
            kf.scale = (sp.r % 2 == 1 ? 1.0 : -1.0) * two_pi_2r / fact2r;
            return cbc_impl(b, m, s, kernel, interlace_r, [&, kf](int j) {
                KorobovKernel out = kf;
                out.gamma = kernel.gamma(j);
                return out;
            });
        }
        case Flavor::Standard: {
            if (interlace_r != 1)
                throw std::invalid_argument(
                    "cbc: tabulated standard-flavor path requires interlace factor 1");
            if (n > 1024)
                throw std::invalid_argument("cbc: standard flavor supported up to n = 1024");
            auto tables = std::make_shared<std::map<int, std::vector<double>>>();
            const int ni = static_cast<int>(n);
            return cbc_impl(b, m, s, kernel, 1, [&, tables, ni](int j) {
                auto it = tables->find(j);
                if (it == tables->end())
                    it = tables->emplace(j, standard_kernel_table(sp, kernel.gamma(j), ni))
                             .first;
                return TabulatedKernel{it->second.data(), ni};
            });
        }
    }
    throw std::invalid_argument("cbc: unknown flavor");
}

double wce_prefix(const QuadratureRule& rule, const ProductKernel& kernel, int dims) {
    if (dims < 1 || dims > rule.s)
        throw std::invalid_argument("wce prefix: bad dimension count");
    QuadratureRule restricted;
    restricted.s = dims;
    restricted.kind = rule.kind;
    restricted.weights = rule.weights;
    for (const auto& t : rule.nodes)
        restricted.nodes.emplace_back(t.begin(), t.begin() + dims);
    ProductKernel sub(kernel.space(), kernel.weights(), dims);
    return wce(restricted, sub);
}

}  // namespace wqmc
