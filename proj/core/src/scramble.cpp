#include "wqmc/scramble.hpp"

#include <cmath>
#include <stdexcept>

#include "wqmc/numeric.hpp"

namespace wqmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ULL * b + 0x165667b19e3779f9ULL));
}

// The six permutations of {0,1,2}; base-2 uses the parity bit directly.
constexpr int kPerm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

int scramble_digit(int digit, int b, std::uint64_t h) {
    if (b == 2) return digit ^ static_cast<int>(h & 1u);
    return kPerm3[h % 6][digit];
}

}  // namespace

std::vector<std::vector<double>> owen_scramble(
    const std::vector<std::vector<double>>& points, int b, std::uint64_t seed,
    std::uint64_t replicate) {
    if (b != 2 && b != 3) throw std::invalid_argument("scramble: base must be 2 or 3");
    const int depth = b == 2 ? 52 : 32;
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    const std::uint64_t key0 = mix(seed, replicate);
    for (const auto& p : points) {
        std::vector<double> t(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const std::uint64_t keyj = mix(key0, 0x5151ULL + j);
            double x = p[j];
            if (!(x >= 0.0) || x >= 1.0)
                throw std::invalid_argument("scramble: point outside [0,1)");
            double v = 0.0, place = 1.0;
            std::uint64_t prefix = 1;  // leading sentinel distinguishes lengths
            for (int l = 0; l < depth; ++l) {
                x *= b;
                int digit = static_cast<int>(std::floor(x));
                if (digit >= b) digit = b - 1;
                x -= digit;
                place /= b;
                std::uint64_t h = mix(keyj, prefix);
                v += scramble_digit(digit, b, h) * place;
                prefix = prefix * static_cast<std::uint64_t>(b) +
                         static_cast<std::uint64_t>(digit);
            }
            t[j] = v;
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::vector<double>> digital_shift(
    const std::vector<std::vector<double>>& points, std::uint64_t seed,
    std::uint64_t replicate) {
    if (points.empty()) return {};
    const std::size_t s = points.front().size();
    const std::uint64_t key0 = mix(seed, replicate);
    std::vector<double> sigma(s);
    for (std::size_t j = 0; j < s; ++j)
        sigma[j] = static_cast<double>(mix(key0, 0x7171ULL + j) >> 11) * 0x1p-53;
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        std::vector<double> t(s);
        for (std::size_t j = 0; j < s; ++j) {
            double v = p[j] + sigma[j];
            if (v >= 1.0) v -= 1.0;
            t[j] = v;
        }
        out.push_back(std::move(t));
    }
    return out;
}

QuadratureRule RandomizedRuleFamily::realize(std::uint64_t replicate) const {
    QuadratureRule rule = base;
    if (kind == Randomization::OwenScramble) {
        rule.nodes = owen_scramble(base.nodes, b, seed, replicate);
        rule.kind = base.kind == RuleKind::Plr ? RuleKind::ScrambledPlr : base.kind;
    } else {
        rule.nodes = digital_shift(base.nodes, seed, replicate);
        rule.kind = base.kind == RuleKind::Plr ? RuleKind::ShiftedPlr : base.kind;
    }
    return rule;
}

RandomizedError randomized_error(const RandomizedRuleFamily& family,
                                 const ProductFunction& f,
                                 const ProductKernel& kernel, int replicates) {
    if (replicates < 2) throw std::invalid_argument("randomized error: need R >= 2");
    if (f.active_dims() > family.base.s)
        throw std::invalid_argument("randomized error: integrand dimension too large");
    if (!kernel.infinite() && kernel.dims() < family.base.s)
        throw std::invalid_argument("randomized error: kernel dimension too small");
    const double exact = integrate_exact(f);
    KahanSum sum_err, sum_sq;
    for (int rep = 0; rep < replicates; ++rep) {
        QuadratureRule rule = family.realize(static_cast<std::uint64_t>(rep));
        KahanSum q;
        std::vector<double> x(static_cast<std::size_t>(f.active_dims()));
        for (int i = 0; i < rule.n(); ++i) {
            const auto& node = rule.nodes[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < x.size(); ++j) x[j] = node[j];
            q.add(rule.weights[static_cast<std::size_t>(i)] * f.eval(x));
        }
        double err = q.value() - exact;
        sum_err.add(err);
        sum_sq.add(err * err);
    }
    double rmse = std::sqrt(sum_sq.value() / replicates);
    double bias = sum_err.value() / replicates;
    return {rmse, bias};
}

}  // namespace wqmc
