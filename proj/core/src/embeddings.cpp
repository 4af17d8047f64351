#include "wqmc/embeddings.hpp"

#include <cmath>
#include <stdexcept>

#include "wqmc/bspline.hpp"

namespace wqmc {

namespace {

// sqrt of the largest generalized eigenvalue of (A, B): the norm of the
// identity map from the B-quadratic-form space to the A one, restricted to
// the shared spline subspace.
double identity_norm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        A, B, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("embedding norm: generalized eigensolve failed");
    double lam = es.eigenvalues().maxCoeff();
    if (!(lam > 0.0))
        throw std::runtime_error("embedding norm: indefinite quadratic form");
    return std::sqrt(lam);
}

// Weighted norm Gram N = G1 + G2/gamma for one coordinate.
Eigen::MatrixXd norm_gram(const SeminormGrams& g, double gamma) {
    return g.G1 + g.G2 / gamma;
}

// Per-coordinate embedding norm for the periodic flavor, where both norms
// are diagonal in the Fourier basis.
double korobov_factor(double gamma_target, double gamma_source) {
    // ratio over the constant mode is 1; over every other mode it is
    // gamma_source / gamma_target.
    return std::sqrt(std::max(1.0, gamma_source / gamma_target));
}

}  // namespace

double embedding_norm_lower(const EmbeddingProblem& prob) {
    prob.target.validate();
    prob.source.validate();
    if (prob.target.r != prob.source.r)
        throw std::invalid_argument("embedding norm: smoothness mismatch");
    if (prob.s < 1) throw std::invalid_argument("embedding norm: bad dimension");
    if (!prob.target_weights.summable() || !prob.source_weights.summable())
        throw std::invalid_argument("embedding norm: weights must be summable");

    bool kor_t = prob.target.flavor == Flavor::Korobov;
    bool kor_s = prob.source.flavor == Flavor::Korobov;
    if (kor_t != kor_s)
        throw std::invalid_argument("embedding norm: incompatible flavor pairing");

    double log_norm = 0.0;
    if (kor_t) {
        for (int j = 1; j <= prob.s; ++j)
            log_norm += std::log(korobov_factor(prob.target_weights.weight(j),
                                                prob.source_weights.weight(j)));
        return std::exp(log_norm);
    }

    SeminormGrams gt = seminorm_grams(prob.target, prob.basis_cells);
    SeminormGrams gs = seminorm_grams(prob.source, prob.basis_cells);
    for (int j = 1; j <= prob.s; ++j) {
        double f = identity_norm(norm_gram(gt, prob.target_weights.weight(j)),
                                 norm_gram(gs, prob.source_weights.weight(j)));
        log_norm += std::log(f);
    }
    return std::exp(log_norm);
}

std::vector<UniformBoundRow> uniform_bound_sweep(const UnivariateSpace& flavor_i,
                                                 const UnivariateSpace& flavor_ii,
                                                 const WeightSequence& weights,
                                                 double c0, int s_max,
                                                 int basis_cells) {
    if (!(c0 > 0.0)) throw std::invalid_argument("uniform bound sweep: c0 must be positive");
    if (s_max < 1) throw std::invalid_argument("uniform bound sweep: bad s_max");

    auto norms_at = [&](const UnivariateSpace& target, const UnivariateSpace& source,
                        double target_scale, double source_scale, int s) {
        EmbeddingProblem p;
        p.target = target;
        p.source = source;
        p.target_weights = weights.scaled(target_scale);
        p.source_weights = weights.scaled(source_scale);
        p.s = s;
        p.basis_cells = basis_cells;
        return embedding_norm_lower(p);
    };

    std::vector<UniformBoundRow> rows;
    for (int s = 1; s <= s_max; ++s) {
        UniformBoundRow row;
        row.s = s;
        // Embedding of II at c0*gamma into I at gamma, and its mirror images.
        row.norm_fwd_c0 = norms_at(flavor_i, flavor_ii, 1.0, c0, s);
        row.norm_inv_c0inv = norms_at(flavor_ii, flavor_i, 1.0 / c0, 1.0, s);
        row.norm_fwd_c0inv = norms_at(flavor_i, flavor_ii, 1.0 / c0, 1.0, s);
        row.norm_inv_c0 = norms_at(flavor_ii, flavor_i, 1.0, c0, s);
        row.budget = weights.embedding_budget(s);
        rows.push_back(row);
    }
    return rows;
}

std::pair<double, double> divergence_counterexample(int r, const WeightSequence& weights,
                                                 int s) {
    if (r < 2)
        throw std::invalid_argument(
            "counterexample: needs smoothness >= 2 (the defective pair drops the "
            "first-derivative term)");
    if (s < 1) throw std::invalid_argument("counterexample: bad dimension");

    // f_j(x) = sqrt(3) x: ||f||_{1,S}^2 = 1 and ||f||_{2,S}^2 = 3 under the
    // full pair; the defective pair's second seminorm starts at derivative
    // order 2 and vanishes on linear functions.
    PiecewisePoly f = PiecewisePoly::polynomial({0.0, std::sqrt(3.0)});
    double s1_sq = f.integral_of_square();
    double s2_sq = 0.0;
    PiecewisePoly d = f.derivative();
    for (int nu = 1; nu <= r; ++nu) {
        s2_sq += d.integral_of_square();
        d = d.derivative();
    }
    double s2_primed_sq = s2_sq - f.derivative().integral_of_square();

    double lhs = 1.0, rhs = 1.0;
    for (int j = 1; j <= s; ++j) {
        double g = weights.weight(j);
        lhs *= s1_sq + s2_primed_sq / g;
        rhs *= s1_sq + s2_sq / g;
    }
    return {lhs, rhs};
}

}  // namespace wqmc
