#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/tensor_space.hpp"

namespace wqmc {

// Cost accounting for integration with infinitely many variables: a function
// evaluation touching nu "non-default" coordinates is billed $(nu), with fix /
// nest / unr differing in which coordinates count as touched.
enum class CostVariant { Fix, Nest, Unr };
enum class CostGrowth { Linear, Power, Exp };

struct CostModel {
    CostVariant variant = CostVariant::Unr;
    CostGrowth growth = CostGrowth::Linear;
    double sigma_c = 1.0;  // exponent of the power/exp growth
    double anchor = 0.0;   // the default coordinate value

    // $(nu): 1+nu (linear), (1+nu)^sigma_c (power), e^{sigma_c nu} (exp).
    double dollars(int nu) const;
    void validate() const;
};

// A cubature node together with the set of coordinates that differ from the
// cost model's default value.
struct ProvenancedNode {
    std::vector<double> coords;    // values of the active coordinates, in order
    std::vector<int> active;       // sorted 1-based coordinate indices
};

struct ProvenancedRule {
    std::vector<ProvenancedNode> nodes;
    std::vector<double> weights;
};

// fix: n * $(smallest prefix covering every node);
// nest: sum_i $(smallest prefix covering node i);
// unr: sum_i $(|active_i|).
double cost(const ProvenancedRule& rule, const CostModel& model);

enum class Setting { Det, Ran };
enum class LambdaModel { Std, Fix, Nest, Unr };

// Theoretical bracket [lower, upper] for the optimal cost exponent; `open`
// marks the randomized nested case with r >= 2 and decay > 2 sigma r + 1
// where the sharp value is unknown.
struct LambdaBracket {
    double lower;
    double upper;
    bool open = false;
};
LambdaBracket theoretical_lambda(Setting setting, LambdaModel model, int r,
                                 double decay, CostGrowth growth = CostGrowth::Linear,
                                 double sigma_c = 1.0);

// Multivariate decomposition method plan: active sets in decreasing
// gamma_u * d^{2|u|} order until the activation cost reaches budget/2, then
// per-set sample sizes from the remaining budget (powers of 2).
struct MDMPlan {
    std::vector<std::vector<int>> sets;   // includes the empty set
    std::vector<std::uint64_t> n;         // per-set rule size (>= 1)
    double threshold = 0.0;               // squared score of the cut
    double budget = 0.0;
};
MDMPlan mdm_plan(const WeightSequence& weights, const UnivariateSpace& space,
                 double budget, const CostModel& model, double rate_hint = 1.0);

struct IntegrationResult {
    double estimate;
    double cost;
};

// estimate = sum_u Q_u(f_u) over the plan's sets, with f_u the product-form
// decomposition component and Q_u a lattice rule (scrambled when randomized).
IntegrationResult mdm_integrate(const ProductFunction& f, const MDMPlan& plan,
                                const UnivariateSpace& space,
                                const WeightSequence& weights, Setting setting,
                                std::uint64_t seed, const CostModel& model);

// Telescoping over dimension truncations s_l = 2^l with anchored tails;
// sample sizes balanced against $(s_l) within the budget.
IntegrationResult multilevel_integrate(const ProductFunction& f, int levels,
                                       const CostModel& model,
                                       const UnivariateSpace& space,
                                       const WeightSequence& weights,
                                       Setting setting, std::uint64_t seed,
                                       double budget, double rate_hint = 1.0);

// One s-dimensional rule of size n on the truncated integrand; coordinates
// beyond s sit at the model's default value.
IntegrationResult fixed_subspace_integrate(const ProductFunction& f, int s,
                                           std::uint64_t n,
                                           const UnivariateSpace& space,
                                           const WeightSequence& weights,
                                           Setting setting, std::uint64_t seed,
                                           const CostModel& model);

// Least-squares slope of -log(error) against log(cost), with standard error.
struct RateFit {
    double lambda_hat;
    double stderr_hat;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& cost_error);

}  // namespace wqmc
