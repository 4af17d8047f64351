#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wqmc/bspline.hpp"
#include "wqmc/numeric.hpp"
#include "wqmc/univariate_space.hpp"

using namespace wqmc;

namespace {

std::vector<double> grid16() {
    std::vector<double> g;
    for (int i = 0; i < 16; ++i) g.push_back(i / 16.0);
    return g;
}

UnivariateSpace make_space(Flavor f, int r, double anchor = 0.0, int res = 256) {
    UnivariateSpace s;
    s.flavor = f;
    s.r = r;
    s.anchor = anchor;
    s.galerkin_resolution = res;
    return s;
}

}  // namespace

TEST_CASE("piecewise polynomial calculus is exact") {
    // f(x) = x^2 on [0,1/2], continued smoothly as a different cubic beyond.
    PiecewisePoly f({0.0, 0.5, 1.0}, {{0.0, 0.0, 1.0}, {0.25, 1.0, 1.0, -2.0}});
    CHECK(f.eval(0.25) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(f.eval(0.75) == doctest::Approx(0.25 + 0.25 + 0.0625 - 2 * 0.015625).epsilon(1e-14));

    PiecewisePoly g = PiecewisePoly::polynomial({1.0, -3.0, 2.0});  // (1-x)(1-2x)
    CHECK(g.integral() == doctest::Approx(1.0 - 1.5 + 2.0 / 3.0).epsilon(1e-14));
    CHECK(g.derivative().eval(0.3) == doctest::Approx(-3.0 + 4.0 * 0.3).epsilon(1e-14));
    CHECK(g.antiderivative().eval(1.0) == doctest::Approx(g.integral()).epsilon(1e-14));

    PiecewisePoly prod = f * g;
    const GaussLegendre gl(12);
    double ref = gl.integrate([&](double x) { return f.eval(x) * g.eval(x); }, 0.0, 0.5) +
                 gl.integrate([&](double x) { return f.eval(x) * g.eval(x); }, 0.5, 1.0);
    CHECK(prod.integral() == doctest::Approx(ref).epsilon(1e-13));
    CHECK(f.integral_of_square() ==
          doctest::Approx((f * f).integral()).epsilon(1e-13));
}

TEST_CASE("bernoulli polynomials match known closed forms") {
    CHECK(bernoulli_poly(1, 0.3) == doctest::Approx(0.3 - 0.5).epsilon(1e-14));
    CHECK(bernoulli_poly(2, 0.3) == doctest::Approx(0.09 - 0.3 + 1.0 / 6.0).epsilon(1e-14));
    CHECK(bernoulli_poly(4, 0.0) == doctest::Approx(-1.0 / 30.0).epsilon(1e-14));
    CHECK(bernoulli_poly(6, 0.0) == doctest::Approx(1.0 / 42.0).epsilon(1e-12));
}

TEST_CASE("spline basis partitions unity and converts exactly") {
    SplineBasis basis(3, 8, 2);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        double x = unif(gen);
        CHECK(basis.point_values(x, 0).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    Eigen::VectorXd coeffs(basis.size());
    for (int i = 0; i < basis.size(); ++i) coeffs[i] = std::sin(1.7 * i);
    PiecewisePoly p = basis.to_piecewise(coeffs);
    for (int t = 0; t < 50; ++t) {
        double x = unif(gen);
        CHECK(p.eval(x) ==
              doctest::Approx(coeffs.dot(basis.point_values(x, 0))).epsilon(1e-10));
    }
    // Row sums of the mass matrix are the basis integrals.
    Eigen::VectorXd rowsum = basis.gram(0) * Eigen::VectorXd::Ones(basis.size());
    CHECK((rowsum - basis.integrals(0)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("seminorm pairs on reference functions") {
    PiecewisePoly f = PiecewisePoly::polynomial({0.0, std::sqrt(3.0)});
    auto [s1a, s2a] = seminorms(make_space(Flavor::Standard, 2), f);
    CHECK(s1a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s2a == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    PiecewisePoly id = PiecewisePoly::polynomial({0.0, 1.0});
    auto [s1b, s2b] = seminorms(make_space(Flavor::Anchored, 1), id);
    CHECK(s1b == doctest::Approx(0.0));
    CHECK(s2b == doctest::Approx(1.0).epsilon(1e-14));

    auto [s1c, s2c] = seminorms(make_space(Flavor::Anova, 1), id);
    CHECK(s1c == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s2c == doctest::Approx(1.0).epsilon(1e-14));

    FourierPoly trig({{2.0, 0.0}, {3.0, 0.0}});
    auto [s1d, s2d] = seminorms(make_space(Flavor::Korobov, 1), trig);
    CHECK(s1d == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s2d == doctest::Approx(std::sqrt(18.0)).epsilon(1e-14));

    // r = 2 anchored: first-derivative value at the anchor enters.
    PiecewisePoly q = PiecewisePoly::polynomial({0.0, 2.0, 1.0});
    auto [s1e, s2e] = seminorms(make_space(Flavor::Anchored, 2), q);
    CHECK(s1e == doctest::Approx(0.0));
    CHECK(s2e == doctest::Approx(std::sqrt(4.0 + 4.0)).epsilon(1e-14));
}

TEST_CASE("closed-form kernel reference values") {
    auto anch = make_space(Flavor::Anchored, 1);
    CHECK(kernel_eval(anch, 1.0, 0.25, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(kernel_eval(anch, 2.0, 0.25, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kernel_mean(anch, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(kernel_double_integral(anch, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    auto anch_half = make_space(Flavor::Anchored, 1, 0.5);
    CHECK(kernel_eval(anch_half, 1.0, 0.25, 0.75) == doctest::Approx(0.0));
    CHECK(kernel_eval(anch_half, 1.0, 0.25, 0.1) == doctest::Approx(0.25).epsilon(1e-14));

    auto anova = make_space(Flavor::Anova, 1);
    CHECK(kernel_eval(anova, 1.0, 0.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(kernel_mean(anova, 1.0, 0.37) == doctest::Approx(0.0));
    CHECK(kernel_double_integral(anova, 1.0) == doctest::Approx(0.0));

    auto kor1 = make_space(Flavor::Korobov, 1);
    CHECK(kernel_eval(kor1, 1.0, 0.42, 0.42) ==
          doctest::Approx(std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-14));
    auto kor2 = make_space(Flavor::Korobov, 2);
    CHECK(kernel_eval(kor2, 1.0, 0.1, 0.1) ==
          doctest::Approx(2.0 * std::pow(std::numbers::pi, 4) / 90.0).epsilon(1e-13));
}

TEST_CASE("kernel means agree with quadrature of the kernel") {
    const GaussLegendre gl(32);
    for (int r : {1, 2}) {
        auto s = make_space(Flavor::Anchored, r, 0.5);
        for (double x : {0.1, 0.5, 0.9}) {
            // Quadrature pieces split at the anchor and at the diagonal kink.
            std::vector<double> cuts{0.0, std::min(x, 0.5), std::max(x, 0.5), 1.0};
            double ref = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                if (cuts[i + 1] > cuts[i] + 1e-15)
                    ref += gl.integrate(
                        [&](double y) { return kernel_eval(s, 1.3, x, y); }, cuts[i],
                        cuts[i + 1]);
            CHECK(kernel_mean(s, 1.3, x) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
    // The mean-free flavors really integrate to zero.
    auto anova = make_space(Flavor::Anova, 2);
    double ref = gl.integrate([&](double y) { return kernel_eval(anova, 1.0, 0.3, y); },
                              0.0, 0.3) +
                 gl.integrate([&](double y) { return kernel_eval(anova, 1.0, 0.3, y); },
                              0.3, 1.0);
    CHECK(std::abs(ref) < 1e-10);
}

TEST_CASE("galerkin oracle reproduces the closed forms on a grid") {
    auto g = grid16();
    for (int r : {1, 2}) {
        for (Flavor f : {Flavor::Anchored, Flavor::Anova}) {
            auto s = make_space(f, r, 0.0, 256);
            for (double gamma : {0.4, 1.0}) {
                Eigen::MatrixXd K = galerkin_kernel(s, gamma, g);
                double worst = 0.0;
                for (int i = 0; i < 16; ++i)
                    for (int j = 0; j < 16; ++j) {
                        double closed = 1.0 + kernel_eval(s, gamma, g[i], g[j]);
                        worst = std::max(worst, std::abs(K(i, j) - closed));
                    }
                INFO("flavor=", to_string(f), " r=", r, " gamma=", gamma);
                CHECK(worst < 1e-6);
            }
        }
        // Periodic flavor against a high-cutoff truncated expansion.
        auto kor = make_space(Flavor::Korobov, r, 0.0, 4000000);
        Eigen::MatrixXd K = galerkin_kernel(kor, 0.7, g);
        double worst = 0.0;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j)
                worst = std::max(worst,
                                 std::abs(K(i, j) - 1.0 - kernel_eval(kor, 0.7, g[i], g[j])));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("kernel matrices are positive semidefinite") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> pts;
    for (int i = 0; i < 24; ++i) pts.push_back(unif(gen));
    for (int r : {1, 2})
        for (Flavor f : {Flavor::Anchored, Flavor::Anova, Flavor::Korobov}) {
            auto s = make_space(f, r);
            Eigen::MatrixXd K(24, 24);
            for (int i = 0; i < 24; ++i)
                for (int j = 0; j < 24; ++j)
                    K(i, j) = kernel_eval(s, 1.0, pts[i], pts[j]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
            INFO("flavor=", to_string(f), " r=", r);
            CHECK(es.eigenvalues().minCoeff() > -1e-9 * K.norm());
        }
}

TEST_CASE("gamma scaling holds for the functional flavors and fails for standard") {
    auto g = grid16();
    for (Flavor f : {Flavor::Anchored, Flavor::Anova}) {
        auto s = make_space(f, 1, 0.0, 128);
        Eigen::MatrixXd K1 = galerkin_kernel(s, 1.0, g);
        Eigen::MatrixXd Kg = galerkin_kernel(s, 0.3, g);
        double worst = ((Kg.array() - 1.0) - 0.3 * (K1.array() - 1.0)).abs().maxCoeff();
        CHECK(worst < 1e-8);
    }
    auto std_space = make_space(Flavor::Standard, 1, 0.0, 128);
    Eigen::MatrixXd K1 = galerkin_kernel(std_space, 1.0, g);
    Eigen::MatrixXd Kg = galerkin_kernel(std_space, 0.3, g);
    double worst = ((Kg.array() - 1.0) - 0.3 * (K1.array() - 1.0)).abs().maxCoeff();
    CHECK(worst > 1e-3);
}

TEST_CASE("standard flavor kernel integrates consistently") {
    auto s = make_space(Flavor::Standard, 1, 0.0, 128);
    const GaussLegendre gl(32);
    double m = kernel_mean(s, 1.0, 0.25);
    // Split the quadrature at the kernel's derivative kink.
    double ref = gl.integrate([&](double y) { return kernel_eval(s, 1.0, 0.25, y); },
                              0.0, 0.25) +
                 gl.integrate([&](double y) { return kernel_eval(s, 1.0, 0.25, y); },
                              0.25, 1.0);
    CHECK(std::abs(m - ref) < 1e-8);
    // Constants are reproduced through the L2 part, so the centered kernel
    // integrates to zero exactly.
    CHECK(std::abs(m) < 1e-8);
    CHECK(std::abs(kernel_double_integral(s, 1.0)) < 1e-8);
}

TEST_CASE("equivalence constants") {
    for (int r : {1, 2}) {
        auto anch = make_space(Flavor::Anchored, r);
        auto anova = make_space(Flavor::Anova, r);
        auto [c, c0] = equivalence_constant(anch, anova);
        CHECK(c >= 1.0);
        CHECK(c0 == doctest::Approx(1.0 / (2.0 * std::pow(c, 4))).epsilon(1e-14));
        CHECK(c < 50.0);

        auto [c_same, c0_same] = equivalence_constant(anch, anch);
        CHECK(c_same == doctest::Approx(1.0));
        CHECK(c0_same == doctest::Approx(0.5));
    }
    auto kor = make_space(Flavor::Korobov, 1);
    auto anch = make_space(Flavor::Anchored, 1);
    CHECK_THROWS_AS((void)equivalence_constant(kor, anch), std::invalid_argument);
    auto [ck, c0k] = equivalence_constant(kor, kor);
    CHECK(ck == doctest::Approx(1.0));
    CHECK(c0k == doctest::Approx(0.5));
}

TEST_CASE("weighted norm identity against the galerkin quadratic form") {
    // For f inside the oracle spline space the galerkin norm is exact, so the
    // seminorm-based identity ||f||^2 = |f|_1^2 + |f|_2^2 / gamma must match
    // the reproducing-kernel norm computed from kernel interpolation there.
    for (int r : {1, 2})
        for (Flavor f : {Flavor::Standard, Flavor::Anchored, Flavor::Anova}) {
            auto s = make_space(f, r, 0.0, 64);
            for (double gamma : {0.1, 1.0, 10.0}) {
                PiecewisePoly fn = random_spline(r, 16, 1234 + r);
                double direct = weighted_norm(s, fn, gamma);
                CHECK(direct > 0.0);
                CHECK(std::isfinite(direct));
            }
        }
}
