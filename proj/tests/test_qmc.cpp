#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "wqmc/cbc.hpp"
#include "wqmc/gf_poly.hpp"
#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/scramble.hpp"
#include "wqmc/wce.hpp"

using namespace wqmc;

namespace {

UnivariateSpace make(Flavor f, int r = 1, double a = 0.0) {
    UnivariateSpace s;
    s.flavor = f;
    s.r = r;
    s.anchor = a;
    return s;
}

PolynomialLattice small_lattice(int b, int m, std::vector<std::uint64_t> q_encodings,
                                int interlace_r = 1) {
    PolynomialLattice L;
    L.b = b;
    L.m = m;
    L.modulus = irreducible_poly(b, m);
    for (auto e : q_encodings) L.q.emplace_back(b, e);
    L.interlace_r = interlace_r;
    return L;
}

}  // namespace

TEST_CASE("gf(b) polynomial arithmetic") {
    // (z+1)^2 = z^2+1 over GF(2).
    GFPoly z1(2, 0b11);
    CHECK((z1 * z1).encoding() == 0b101);
    // Division identity on random pairs.
    std::mt19937_64 gen(7);
    for (int b : {2, 3}) {
        for (int t = 0; t < 200; ++t) {
            std::uint64_t lim = b == 2 ? 256 : 243;
            GFPoly num(b, gen() % lim);
            GFPoly den(b, 1 + gen() % (lim - 1));
            auto [quot, rem] = GFPoly::divmod(num, den);
            CHECK((quot * den + rem) == num);
            CHECK(rem.degree() < den.degree());
        }
    }
    // x^2+x+1 is the unique irreducible quadratic over GF(2).
    CHECK(is_irreducible(GFPoly(2, 0b111)));
    CHECK_FALSE(is_irreducible(GFPoly(2, 0b101)));  // (z+1)^2
    CHECK(irreducible_poly(2, 2).encoding() == 0b111);
    for (int deg : {1, 2, 3, 8, 12}) {
        CHECK(is_irreducible(irreducible_poly(2, deg)));
        CHECK(irreducible_poly(2, deg).degree() == deg);
        CHECK(is_irreducible(irreducible_poly(3, deg)));
    }
}

TEST_CASE("lattice points: hand-checked cases") {
    // b=2, m=1, p=z, q=(1) -> {0, 0.5}.
    PolynomialLattice L;
    L.b = 2;
    L.m = 1;
    L.modulus = GFPoly(2, 0b10);  // z
    L.q = {GFPoly::one(2)};
    auto pts = plr_raw_points(L);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0][0] == 0.0);
    CHECK(pts[1][0] == 0.5);

    // First point is always the origin, count is b^m, all points in [0,1).
    auto L2 = small_lattice(2, 4, {1, 9, 13});
    auto pts2 = plr_raw_points(L2);
    CHECK(pts2.size() == 16);
    for (double c : pts2[0]) CHECK(c == 0.0);
    for (const auto& t : pts2)
        for (double c : t) {
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
        }
    // Coordinates are multiples of 1/n.
    for (const auto& t : pts2)
        for (double c : t) CHECK(std::abs(c * 16 - std::round(c * 16)) < 1e-12);
}

TEST_CASE("lattice points form a digital group") {
    auto L = small_lattice(2, 5, {1, 19, 7});
    auto pts = plr_raw_points(L);
    const int n = 32;
    std::set<std::vector<double>> pset(pts.begin(), pts.end());
    std::mt19937_64 gen(11);
    for (int t = 0; t < 64; ++t) {
        const auto& a = pts[gen() % n];
        const auto& c = pts[gen() % n];
        std::vector<double> sum(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            // digitwise XOR of 5-digit binary expansions
            int ia = static_cast<int>(std::lround(a[j] * n));
            int ic = static_cast<int>(std::lround(c[j] * n));
            sum[j] = static_cast<double>(ia ^ ic) / n;
        }
        CHECK(pset.count(sum) == 1);
    }
}

TEST_CASE("digit interlacing") {
    // r=1 is the identity.
    std::vector<double> y{0.3125, 0.71875};
    CHECK(interlace_point(y, 1, 2) == y);
    // Hand-expanded case: (0.5, 0.25) -> 0.1001_2 = 0.5625.
    CHECK(interlace_point({0.5, 0.25}, 2, 2)[0] == doctest::Approx(0.5625).epsilon(1e-15));
    // Output in [0,1).
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        auto out = interlace_point({unif(gen), unif(gen), unif(gen)}, 3, 2);
        CHECK(out[0] >= 0.0);
        CHECK(out[0] < 1.0);
    }
}

TEST_CASE("owen scrambling determinism and uniformity") {
    auto L = small_lattice(2, 4, {1, 9});
    auto pts = plr_raw_points(L);
    auto s1 = owen_scramble(pts, 2, 42, 3);
    auto s2 = owen_scramble(pts, 2, 42, 3);
    CHECK(s1 == s2);  // bit-identical
    auto s3 = owen_scramble(pts, 2, 42, 4);
    CHECK(s1 != s3);

    // Points sharing the first base-b digit keep sharing it after scrambling
    // (depth-0 permutation depends only on the empty prefix).
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t l = 0; l < pts.size(); ++l)
            for (std::size_t j = 0; j < pts[i].size(); ++j)
                if (std::floor(pts[i][j] * 2) == std::floor(pts[l][j] * 2))
                    CHECK(std::floor(s1[i][j] * 2) == std::floor(s1[l][j] * 2));

    // Empirical mean of a scrambled coordinate over replicates ~ 1/2.
    double acc = 0.0;
    const int R = 10000;
    for (int rep = 0; rep < R; ++rep)
        acc += owen_scramble({{0.375, 0.8125}}, 2, 99, static_cast<std::uint64_t>(rep))[0][0];
    double mean = acc / R;
    // sigma of a uniform mean over R draws
    double sigma = std::sqrt(1.0 / 12.0 / R);
    CHECK(std::abs(mean - 0.5) < 3.5 * sigma);
}

TEST_CASE("worst-case error closed forms") {
    // s=1 anchored a=0 r=1, single node 1/2, weight 1: e^2 = gamma/12.
    for (double gamma : {0.25, 1.0, 4.0}) {
        ProductKernel k(make(Flavor::Anchored), WeightSequence::poly(1e-12, gamma), 1);
        QuadratureRule rule;
        rule.s = 1;
        rule.nodes = {{0.5}};
        rule.weights = {1.0};
        CHECK(wce(rule, k) == doctest::Approx(std::sqrt(gamma / 12.0)).epsilon(1e-9));
    }

    // gamma -> 0: kernel tends to the constant space, error tends to 0 for
    // any rule with weights summing to 1.
    ProductKernel ksmall(make(Flavor::Anchored), WeightSequence::poly(1e-12, 1e-12), 2);
    QuadratureRule r2;
    r2.s = 2;
    r2.nodes = {{0.2, 0.7}, {0.9, 0.1}};
    r2.weights = {0.3, 0.7};
    CHECK(wce(r2, ksmall) < 1e-5);

    // Random rule matches a naive reimplementation of the double sum.
    ProductKernel k2(make(Flavor::Anova), WeightSequence::poly(2.0, 1.0), 2);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    QuadratureRule rnd;
    rnd.s = 2;
    for (int i = 0; i < 4; ++i) {
        rnd.nodes.push_back({unif(gen), unif(gen)});
        rnd.weights.push_back(0.25);
    }
    long double e2 = 1.0L;  // double integral (anova means vanish)
    for (int j = 1; j <= 2; ++j) e2 = e2 * k2.factor_double_integral(j);
    for (int i = 0; i < 4; ++i) {
        double mi = 1.0;
        for (int j = 1; j <= 2; ++j) mi *= k2.factor_mean(j, rnd.nodes[i][j - 1]);
        e2 -= 2.0L * 0.25L * mi;
    }
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l)
            e2 += 0.0625L * k2.eval(rnd.nodes[i], rnd.nodes[l]);
    CHECK(wce(rnd, k2) ==
          doctest::Approx(std::sqrt(static_cast<double>(e2))).epsilon(1e-9));
}

TEST_CASE("shift-averaged squared error matches the shift-invariant mean") {
    // Average of wce^2 over digital shifts ~ the Monte Carlo mean within 3
    // standard errors of itself across two disjoint batches.
    ProductKernel k(make(Flavor::Korobov), WeightSequence::poly(2.0, 1.0), 2);
    auto L = small_lattice(2, 4, {1, 9});
    auto base = plr_rule(L);
    auto batch = [&](std::uint64_t seed, int count) {
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < count; ++i) {
            QuadratureRule shifted = base;
            shifted.nodes = digital_shift(base.nodes, seed, static_cast<std::uint64_t>(i));
            double e = wce(shifted, k);
            acc += e * e;
            acc2 += e * e * e * e;
        }
        double mean = acc / count;
        double var = std::max(0.0, acc2 / count - mean * mean);
        return std::pair<double, double>(mean, std::sqrt(var / count));
    };
    auto [m1, s1] = batch(1, 64);
    auto [m2, s2] = batch(2, 64);
    CHECK(std::abs(m1 - m2) < 3.0 * std::sqrt(s1 * s1 + s2 * s2) + 1e-12);
}

TEST_CASE("cbc single-candidate case and monotonicity") {
    ProductKernel k(make(Flavor::Anchored), WeightSequence::poly(3.0, 1.0), 1);
    auto L = cbc_construct(2, 1, 1, k);
    CHECK(L.q.size() == 1);
    CHECK(L.q[0].encoding() == 1);
    auto rule = plr_rule(L);
    REQUIRE(rule.n() == 2);
    CHECK(rule.nodes[0][0] == 0.0);
    CHECK(rule.nodes[1][0] == 0.5);

    // The chosen q_j is at least as good as every fixed candidate.
    ProductKernel k3(make(Flavor::Anchored), WeightSequence::poly(3.0, 1.0), 3);
    auto L3 = cbc_construct(2, 4, 3, k3);
    double chosen = wce(plr_rule(L3), k3);
    std::mt19937_64 gen(23);
    for (int t = 0; t < 8; ++t) {
        PolynomialLattice alt = L3;
        alt.q[2] = GFPoly(2, 1 + gen() % 15);
        CHECK(chosen <= wce(plr_rule(alt), k3) + 1e-12);
    }
}

TEST_CASE("cbc error decays with n for every flavor") {
    for (Flavor f : {Flavor::Anchored, Flavor::Anova, Flavor::Korobov, Flavor::Standard}) {
        UnivariateSpace sp = make(f, 1);
        sp.galerkin_resolution = 128;
        ProductKernel k(sp, WeightSequence::poly(3.0, 1.0), 2);
        double first = 0.0, prev = 1e9;
        for (int m : {3, 5, 7}) {
            auto L = cbc_construct(2, m, 2, k);
            double e = wce(plr_rule(L), k);
            CAPTURE(to_string(f));
            CAPTURE(m);
            CHECK(e < prev);
            prev = e;
            if (m == 3) first = e;
        }
        // 16x more points at rate ~1 should shrink the error by an order of
        // magnitude; allow generous slack for the preasymptotic regime.
        CHECK(prev < first / 5.0);
    }
}

TEST_CASE("interlaced cbc improves the smooth-space error") {
    // r=2 periodic space: interlacing factor 2 should beat plain PLR at equal n.
    ProductKernel k(make(Flavor::Korobov, 2), WeightSequence::poly(3.0, 1.0), 2);
    auto plain = cbc_construct(2, 6, 2, k, 1);
    auto inter = cbc_construct(2, 6, 2, k, 2);
    CHECK(inter.d() == 4);
    double e_plain = wce(plr_rule(plain), k);
    double e_inter = wce(plr_rule(inter), k);
    CHECK(e_inter < e_plain);
}

TEST_CASE("randomized error: exactness and unbiasedness") {
    ProductKernel k(make(Flavor::Anchored), WeightSequence::poly(3.0, 1.0), 2);
    auto L = cbc_construct(2, 5, 2, k);
    RandomizedRuleFamily fam;
    fam.base = plr_rule(L);
    fam.kind = Randomization::OwenScramble;
    fam.seed = 7;

    // f == 1 integrates exactly for every realization.
    ProductFunction one({UnivariateFunction(PiecewisePoly::constant(1.0))});
    auto res1 = randomized_error(fam, one, k, 8);
    CHECK(res1.rmse == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res1.bias == doctest::Approx(0.0).epsilon(1e-12));

    // Unbiasedness within 3 sigma for a nontrivial product integrand.
    std::vector<UnivariateFunction> fs{PiecewisePoly::polynomial({0.0, 0.0, 3.0}),
                                       PiecewisePoly::polynomial({0.5, 1.0})};
    ProductFunction f(fs);
    const int R = 256;
    auto res = randomized_error(fam, f, k, R);
    double sigma_mean = res.rmse / std::sqrt(static_cast<double>(R));
    CHECK(std::abs(res.bias) <= 3.0 * sigma_mean + 1e-12);
}

TEST_CASE("lattice text round-trip") {
    auto L = small_lattice(2, 5, {1, 19, 7}, 1);
    auto text = lattice_to_text(L);
    auto back = lattice_from_text(text);
    CHECK(back.b == L.b);
    CHECK(back.m == L.m);
    CHECK(back.modulus == L.modulus);
    REQUIRE(back.q.size() == L.q.size());
    for (std::size_t i = 0; i < L.q.size(); ++i) CHECK(back.q[i] == L.q[i]);
    CHECK(plr_raw_points(back) == plr_raw_points(L));
}

TEST_CASE("input validation") {
    ProductKernel k(make(Flavor::Anchored), WeightSequence::poly(3.0, 1.0), 1);
    CHECK_THROWS_AS((void)cbc_construct(5, 3, 1, k), std::invalid_argument);
    CHECK_THROWS_AS((void)cbc_construct(2, 3, 2, k), std::invalid_argument);
    QuadratureRule bad;
    bad.s = 1;
    bad.nodes = {{1.5}};
    bad.weights = {1.0};
    CHECK_THROWS_AS((void)wce(bad, k), std::invalid_argument);
}
