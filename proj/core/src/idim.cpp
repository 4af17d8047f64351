#include "wqmc/idim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "wqmc/cbc.hpp"
#include "wqmc/numeric.hpp"
#include "wqmc/scramble.hpp"
#include "wqmc/univariate_space.hpp"

namespace wqmc {

double CostModel::dollars(int nu) const {
    if (nu < 0) throw std::invalid_argument("cost model: negative arity");
    switch (growth) {
        case CostGrowth::Linear: return 1.0 + nu;
        case CostGrowth::Power: return std::pow(1.0 + nu, sigma_c);
        case CostGrowth::Exp: return std::exp(sigma_c * nu);
    }
    throw std::invalid_argument("cost model: unknown growth");
}

void CostModel::validate() const {
    if (!(sigma_c > 0.0)) throw std::invalid_argument("cost model: sigma must be positive");
}

double cost(const ProvenancedRule& rule, const CostModel& model) {
    model.validate();
    if (rule.nodes.size() != rule.weights.size())
        throw std::invalid_argument("cost: node/weight count mismatch");
    auto prefix = [](const ProvenancedNode& node) {
        return node.active.empty() ? 0 : node.active.back();
    };
    switch (model.variant) {
        case CostVariant::Fix: {
            int s = 0;
            for (const auto& node : rule.nodes) s = std::max(s, prefix(node));
            return static_cast<double>(rule.nodes.size()) * model.dollars(s);
        }
        case CostVariant::Nest: {
            double acc = 0.0;
            for (const auto& node : rule.nodes) acc += model.dollars(prefix(node));
            return acc;
        }
        case CostVariant::Unr: {
            double acc = 0.0;
            for (const auto& node : rule.nodes)
                acc += model.dollars(static_cast<int>(node.active.size()));
            return acc;
        }
    }
    throw std::invalid_argument("cost: unknown variant");
}

LambdaBracket theoretical_lambda(Setting setting, LambdaModel model, int r,
                                 double decay, CostGrowth growth, double sigma_c) {
    if (r < 1) throw std::invalid_argument("lambda: smoothness must be >= 1");
    if (!(decay > 1.0)) throw std::invalid_argument("lambda: decay must exceed 1");
    const double rr = static_cast<double>(r);
    switch (model) {
        case LambdaModel::Std:
            // Dimension-independent tractability exponents; cost = n.
            if (setting == Setting::Det)
                return {std::min(decay / 2.0, rr), rr, false};
            return {std::min(decay / 2.0, rr + 0.5), rr + 0.5, false};
        case LambdaModel::Unr: {
            // Growth must be Omega(nu) and O(e^{sigma nu}).
            if (growth == CostGrowth::Power && sigma_c < 1.0)
                throw std::invalid_argument("lambda: unrestricted model needs growth >= linear");
            double v = setting == Setting::Det
                           ? std::min(rr, (decay - 1.0) / 2.0)
                           : std::min(rr + 0.5, (decay - 1.0) / 2.0);
            return {v, v, false};
        }
        case LambdaModel::Nest: {
            // Growth must be Theta(nu^sigma).
            if (growth == CostGrowth::Exp)
                throw std::invalid_argument("lambda: nested model needs polynomial growth");
            double sigma = growth == CostGrowth::Linear ? 1.0 : sigma_c;
            if (setting == Setting::Det) {
                if (sigma < (2.0 * rr - 1.0) / (2.0 * rr))
                    throw std::invalid_argument("lambda: sigma below the nested-det range");
                double v = std::min(rr, (decay - 1.0) / (2.0 * sigma));
                return {v, v, false};
            }
            if (sigma < 2.0 * rr / (2.0 * rr + 1.0))
                throw std::invalid_argument("lambda: sigma below the nested-ran range");
            double lo = std::min(std::max(rr, 1.5), (decay - 1.0) / (2.0 * sigma));
            double hi = std::min(rr + 0.5, (decay - 1.0) / (2.0 * sigma));
            bool matched = r == 1 || decay <= 2.0 * sigma * rr + 1.0;
            if (matched) return {hi, hi, false};
            return {lo, hi, true};
        }
        case LambdaModel::Fix: {
            if (setting == Setting::Det)
                throw std::invalid_argument("lambda: no fixed-subspace bracket in the deterministic setting");
            if (growth != CostGrowth::Linear)
                throw std::invalid_argument("lambda: fixed-subspace bracket needs linear growth");
            double beta = 0.5 * std::min(decay, 2.0 * rr + 1.0);
            double lo = beta * (decay - 1.0) / (2.0 * beta - 1.0 + decay);
            double hi = (rr + 0.5) * (decay - 1.0) / (2.0 * rr + decay);
            if (decay >= 2.0 * rr + 1.0) return {hi, hi, false};
            return {lo, hi, false};
        }
    }
    throw std::invalid_argument("lambda: unknown model");
}

namespace {

// d constant of the plan threshold: sqrt(pi/2) times the estimated L1
// embedding norm of the unweighted univariate space.
double truncation_constant(const UnivariateSpace& space) {
    ProductKernel k1(space, WeightSequence::poly(3.0, 1.0), 1);
    auto check = l1_embedding_check(k1, 4, 12345);
    return std::sqrt(std::numbers::pi / 2.0) * check.bound;
}

std::uint64_t floor_pow2(double x) {
    if (x < 1.0) return 1;
    std::uint64_t n = 1;
    while (2.0 * static_cast<double>(n) <= x && n < (1ULL << 60)) n <<= 1;
    return n;
}

// xi(f): the rank-one functional whose kernel splits the decomposition —
// point value at the anchor, or the mean (= zeroth Fourier coefficient).
double xi_of(const UnivariateSpace& space, const UnivariateFunction& f) {
    if (space.flavor == Flavor::Anchored) return eval(f, space.anchor);
    return integral(f);
}

// The |u|-dimensional lattice rule used per active set / level, cached by
// (dims, m).  Construction uses the leading (largest) weights, which is the
// conservative choice and makes caching across sets of equal size exact.
const QuadratureRule& cached_rule(const UnivariateSpace& space,
                                  const WeightSequence& weights, int dims, int m) {
    static std::map<std::tuple<std::string, int, std::uint64_t>, QuadratureRule> cache;
    // Cache key folds in the space and weight configuration.
    std::string cfg = to_string(space.flavor) + "/" + std::to_string(space.r) + "/" +
                      std::to_string(space.anchor) + "/" + weights.to_config_string();
    auto key = std::make_tuple(cfg, dims, (static_cast<std::uint64_t>(m) << 8));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    QuadratureRule rule;
    if (m == 0) {
        rule.s = dims;
        rule.nodes = {std::vector<double>(static_cast<std::size_t>(dims), 0.0)};
        rule.weights = {1.0};
        rule.kind = RuleKind::Plr;
    } else if (dims == 1) {
        // Single-candidate construction: q = (1) for an irreducible modulus.
        PolynomialLattice L;
        L.b = 2;
        L.m = m;
        L.modulus = irreducible_poly(2, m);
        L.q = {GFPoly::one(2)};
        rule = plr_rule(L);
    } else {
        int interlace_r = space.r >= 2 ? space.r : 1;
        ProductKernel k(space, weights, dims);
        rule = plr_rule(cbc_construct(2, m, dims, k, interlace_r));
    }
    return cache.emplace(std::move(key), std::move(rule)).first->second;
}

int log2_of(std::uint64_t n) {
    int m = 0;
    while ((1ULL << m) < n) ++m;
    return m;
}

}  // namespace

MDMPlan mdm_plan(const WeightSequence& weights, const UnivariateSpace& space,
                 double budget, const CostModel& model, double rate_hint) {
    model.validate();
    if (!space.gamma_homogeneous())
        throw std::invalid_argument("mdm: homogeneous flavor required");
    if (!weights.summable()) throw std::invalid_argument("mdm: weights must be summable");
    if (budget < model.dollars(0))
        throw std::invalid_argument("mdm: budget below the cost of the constant term");

    const double d = truncation_constant(space);
    const double d2 = d * d;

    // Scores a_j = gamma_j d^2; indices with a_j > 1 (the "head") can raise a
    // set's score, everything after can only lower it.
    std::vector<double> a;
    int head = 0;
    for (int j = 1; j <= 4096; ++j) {
        double aj = weights.weight(j) * d2;
        a.push_back(aj);
        if (aj > 1.0) head = j;
        if (aj < 1e-30) break;
    }
    if (head > 16) throw std::invalid_argument("mdm: weights too flat for set enumeration");
    const int J = static_cast<int>(a.size());

    // Best-first enumeration of subsets in decreasing score order: each head
    // subset is crossed with the tail subsets (indices > head, scores <= 1),
    // which a sibling/child heap enumerates in decreasing order.
    struct Entry {
        double score;
        std::vector<int> set;
        bool operator<(const Entry& other) const { return score < other.score; }
    };
    std::priority_queue<Entry> heap;
    for (std::uint32_t mask = 0; mask < (1u << head); ++mask) {
        double sc = 1.0;
        std::vector<int> u;
        for (int j = 1; j <= head; ++j)
            if (mask & (1u << (j - 1))) {
                sc *= a[static_cast<std::size_t>(j - 1)];
                u.push_back(j);
            }
        heap.push({sc, std::move(u)});
    }

    MDMPlan plan;
    plan.budget = budget;
    // The constant term is always kept, even when budget/2 < $(0); the
    // budget precondition above guarantees it is affordable overall.
    plan.sets.push_back({});
    double activation = model.dollars(0);
    const double activation_budget = budget / 2.0;
    while (!heap.empty()) {
        Entry top = heap.top();
        heap.pop();
        if (!top.set.empty()) {
            double c = model.dollars(static_cast<int>(top.set.size()));
            if (activation + c > activation_budget) {
                plan.threshold = top.score;
                break;
            }
            activation += c;
            plan.sets.push_back(top.set);
        }

        // Each tail subset is reached exactly once: extend by the first
        // index past the current maximum, or shift the last tail index up.
        int last = top.set.empty() ? 0 : top.set.back();
        int next = std::max(last, head) + 1;
        if (next <= J) {
            Entry child;
            child.set = top.set;
            child.set.push_back(next);
            child.score = top.score * a[static_cast<std::size_t>(next - 1)];
            heap.push(std::move(child));
        }
        if (last > head && last + 1 <= J) {
            Entry sib;
            sib.set = top.set;
            sib.set.back() = last + 1;
            sib.score = top.score / a[static_cast<std::size_t>(last - 1)] *
                        a[static_cast<std::size_t>(last)];
            heap.push(std::move(sib));
        }
    }

    // Sample sizes: n_u proportional to score^{1/(tau+1/2)}, scaled so the
    // sampling cost fits in the other half of the budget; powers of two.
    const double expo = 1.0 / (rate_hint + 0.5);
    std::vector<double> share(plan.sets.size());
    for (std::size_t i = 0; i < plan.sets.size(); ++i) {
        double sc = 1.0;
        for (int j : plan.sets[i]) sc *= a[static_cast<std::size_t>(j - 1)];
        share[i] = std::pow(std::max(sc, 1e-300), expo);
    }
    auto spend = [&](double scale) {
        double total = 0.0;
        for (std::size_t i = 0; i < plan.sets.size(); ++i)
            total += static_cast<double>(floor_pow2(scale * share[i])) *
                     model.dollars(static_cast<int>(plan.sets[i].size()));
        return total;
    };
    // The n_u = 1 baseline alone costs as much as the activation budget, so
    // the sampling scale is chosen against the full budget: the reported
    // integration cost is sum_u n_u $(|u|) <= budget.
    double lo = 0.0, hi = 1.0;
    while (spend(hi) <= budget && hi < 1e18) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (spend(mid) <= budget) lo = mid; else hi = mid;
    }
    plan.n.resize(plan.sets.size());
    for (std::size_t i = 0; i < plan.sets.size(); ++i) {
        std::uint64_t n = floor_pow2(lo * share[i]);
        // Dimension >= 2 rules go through the quadratic-memory search.
        if (plan.sets[i].size() >= 2) n = std::min<std::uint64_t>(n, 8192);
        if (plan.sets[i].size() == 1) n = std::min<std::uint64_t>(n, 1ULL << 20);
        if (plan.sets[i].empty()) n = 1;  // the constant term needs one evaluation
        plan.n[i] = n;
    }
    return plan;
}

IntegrationResult mdm_integrate(const ProductFunction& f, const MDMPlan& plan,
                                const UnivariateSpace& space,
                                const WeightSequence& weights, Setting setting,
                                std::uint64_t seed, const CostModel& model) {
    if (!space.gamma_homogeneous())
        throw std::invalid_argument("mdm: homogeneous flavor required");
    const int active = f.active_dims();
    std::vector<double> c(static_cast<std::size_t>(active));
    for (int j = 1; j <= active; ++j)
        c[static_cast<std::size_t>(j - 1)] = xi_of(space, f.factor(j));

    KahanSum estimate;
    double total_cost = 0.0;
    for (std::size_t idx = 0; idx < plan.sets.size(); ++idx) {
        const auto& u = plan.sets[idx];
        const int k = static_cast<int>(u.size());
        total_cost += static_cast<double>(plan.n[idx]) * model.dollars(k);

        // Component f_u = prod_{j in u} g_j * prod_{j notin u} c_j vanishes
        // when u contains an inactive coordinate (g_j = 0 there).
        bool vanishes = false;
        double outside = 1.0;
        for (int j = 1; j <= active; ++j)
            if (!std::binary_search(u.begin(), u.end(), j))
                outside *= c[static_cast<std::size_t>(j - 1)];
        for (int j : u)
            if (j > active) vanishes = true;
        if (vanishes) continue;

        if (k == 0) {
            estimate.add(outside);
            continue;
        }
        if (outside == 0.0) continue;

        const QuadratureRule& base =
            cached_rule(space, weights, k, log2_of(plan.n[idx]));
        std::vector<std::vector<double>> nodes = base.nodes;
        if (setting == Setting::Ran)
            nodes = owen_scramble(nodes, 2, seed, 0x1000 + idx);

        KahanSum q;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double val = outside;
            for (int pos = 0; pos < k; ++pos) {
                int j = u[static_cast<std::size_t>(pos)];
                val *= eval(f.factor(j), nodes[i][static_cast<std::size_t>(pos)]) -
                       c[static_cast<std::size_t>(j - 1)];
            }
            q.add(base.weights[i] * val);
        }
        estimate.add(q.value());
    }
    return {estimate.value(), total_cost};
}

IntegrationResult multilevel_integrate(const ProductFunction& f, int levels,
                                       const CostModel& model,
                                       const UnivariateSpace& space,
                                       const WeightSequence& weights,
                                       Setting setting, std::uint64_t seed,
                                       double budget, double rate_hint) {
    if (levels < 1) throw std::invalid_argument("multilevel: need at least one level");
    if (!space.gamma_homogeneous())
        throw std::invalid_argument("multilevel: homogeneous flavor required");
    const int active = f.active_dims();
    const double anchor = model.anchor;

    // Truncated integrand: coordinates beyond s pinned to the anchor value.
    auto truncated = [&](int s, std::span<const double> x) {
        double v = 1.0;
        for (int j = 1; j <= active; ++j)
            v *= eval(f.factor(j), j <= s ? x[static_cast<std::size_t>(j - 1)] : anchor);
        return v;
    };

    // Level sizes: n_l ~ (D_l / $(s_l))^{1/(tau+1)} scaled into the budget,
    // with D_l the tail weight mass entering at level l.
    std::vector<int> s_l(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) s_l[static_cast<std::size_t>(l)] = 1 << l;
    std::vector<double> shape(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) {
        double D;
        if (l == 0) {
            D = 1.0;
        } else {
            double tail = 0.0;
            for (int j = s_l[static_cast<std::size_t>(l - 1)] + 1; j <= 4096; ++j) {
                double g = weights.weight(j);
                tail += g;
                if (g < 1e-18) break;
            }
            D = std::sqrt(tail);
        }
        shape[static_cast<std::size_t>(l)] =
            std::pow(D / model.dollars(s_l[static_cast<std::size_t>(l)]),
                     1.0 / (rate_hint + 1.0));
    }
    auto spend = [&](double scale) {
        double total = 0.0;
        for (int l = 0; l < levels; ++l)
            total += static_cast<double>(floor_pow2(scale * shape[static_cast<std::size_t>(l)])) *
                     model.dollars(s_l[static_cast<std::size_t>(l)]);
        return total;
    };
    double lo = 0.0, hi = 1.0;
    while (spend(hi) <= budget && hi < 1e18) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (spend(mid) <= budget) lo = mid; else hi = mid;
    }

    KahanSum estimate;
    double total_cost = 0.0;
    for (int l = 0; l < levels; ++l) {
        int s = s_l[static_cast<std::size_t>(l)];
        std::uint64_t n =
            std::min<std::uint64_t>(floor_pow2(lo * shape[static_cast<std::size_t>(l)]),
                                    s == 1 ? (1ULL << 20) : 8192);
        total_cost += static_cast<double>(n) * model.dollars(s);
        const QuadratureRule& base = cached_rule(space, weights, s, log2_of(n));
        std::vector<std::vector<double>> nodes = base.nodes;
        if (setting == Setting::Ran)
            nodes = owen_scramble(nodes, 2, seed, 0x2000 + static_cast<std::uint64_t>(l));
        int s_prev = l == 0 ? 0 : s_l[static_cast<std::size_t>(l - 1)];
        KahanSum q;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double diff = truncated(s, nodes[i]);
            if (l > 0) diff -= truncated(s_prev, nodes[i]);
            q.add(base.weights[i] * diff);
        }
        estimate.add(q.value());
    }
    return {estimate.value(), total_cost};
}

IntegrationResult fixed_subspace_integrate(const ProductFunction& f, int s,
                                           std::uint64_t n,
                                           const UnivariateSpace& space,
                                           const WeightSequence& weights,
                                           Setting setting, std::uint64_t seed,
                                           const CostModel& model) {
    if (s < 0) throw std::invalid_argument("fixed subspace: negative dimension");
    const int active = f.active_dims();
    const double anchor = model.anchor;
    if (s == 0) {
        double v = 1.0;
        for (int j = 1; j <= active; ++j) v *= eval(f.factor(j), anchor);
        return {v, model.dollars(0)};
    }
    std::uint64_t n_rounded = std::min<std::uint64_t>(
        floor_pow2(static_cast<double>(n)), s == 1 ? (1ULL << 20) : 8192);
    const QuadratureRule& base = cached_rule(space, weights, s, log2_of(n_rounded));
    std::vector<std::vector<double>> nodes = base.nodes;
    if (setting == Setting::Ran) nodes = owen_scramble(nodes, 2, seed, 0x3000);
    KahanSum q;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double v = 1.0;
        for (int j = 1; j <= active; ++j)
            v *= eval(f.factor(j),
                      j <= s ? nodes[i][static_cast<std::size_t>(j - 1)] : anchor);
        q.add(base.weights[i] * v);
    }
    return {q.value(), static_cast<double>(n_rounded) * model.dollars(s)};
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& cost_error) {
    if (cost_error.size() < 4)
        throw std::invalid_argument("fit rate: need at least 4 points");
    const std::size_t n = cost_error.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [c, e] = cost_error[i];
        if (!(c > 0.0) || !(e > 0.0))
            throw std::invalid_argument("fit rate: entries must be positive");
        xs[i] = std::log(c);
        ys[i] = -std::log(e);
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx < 1e-12) throw std::invalid_argument("fit rate: degenerate cost spread");
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double resid = ys[i] - my - slope * (xs[i] - mx);
        rss += resid * resid;
    }
    double se = n > 2 ? std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
    return {slope, se};
}

}  // namespace wqmc
