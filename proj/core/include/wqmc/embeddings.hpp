#pragma once

#include <vector>

#include "wqmc/univariate_space.hpp"
#include "wqmc/weights.hpp"

namespace wqmc {

// Norm estimation for the embedding H(K_s^{eta,II}) -> H(K_s^{gamma,I}).
struct EmbeddingProblem {
    UnivariateSpace target;        // pair I
    UnivariateSpace source;        // pair II
    WeightSequence target_weights; // gamma
    WeightSequence source_weights; // eta
    int s = 1;
    int basis_cells = 64;
};

// Certified lower bound on the embedding norm, nondecreasing under basis
// refinement.  The coordinate Gram matrices of both norms on a shared spline
// subspace are Kronecker factors of the full tensor Grams, so the largest
// generalized eigenvalue of the tensor problem is the product of the
// per-coordinate ones; this evaluates the estimator on the full tensor basis.
double embedding_norm_lower(const EmbeddingProblem& prob);

// The four norms bounded by prod (1+gamma_j)^{1/2}: forward embedding at
// weights c0*gamma, inverse at gamma/c0, and the two with the roles of the
// pairs swapped.
struct UniformBoundRow {
    int s;
    double norm_fwd_c0;      // || i_s^{c0 gamma, gamma} ||
    double norm_inv_c0inv;   // || (i_s^{gamma/c0, gamma})^{-1} ||
    double norm_fwd_c0inv;   // || i_s^{gamma, gamma/c0} ||
    double norm_inv_c0;      // || (i_s^{gamma, c0 gamma})^{-1} ||
    double budget;           // prod_{j<=s} (1+gamma_j)^{1/2}
};
std::vector<UniformBoundRow> uniform_bound_sweep(const UnivariateSpace& flavor_i,
                                                 const UnivariateSpace& flavor_ii,
                                                 const WeightSequence& weights,
                                                 double c0, int s_max,
                                                 int basis_cells = 64);

// Divergence example: for f_j(x) = sqrt(3) x the weighted product norm is 1
// under the defective seminorm pair (second seminorm starts at order 2) but
// prod (1 + 3/gamma_j) under the full pair, so no weight rescaling can make
// the two scales uniformly equivalent.  Requires r >= 2.
std::pair<double, double> divergence_counterexample(int r, const WeightSequence& weights,
                                                 int s);

}  // namespace wqmc
