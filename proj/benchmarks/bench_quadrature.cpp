#include <benchmark/benchmark.h>

#include "wqmc/cbc.hpp"
#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/scramble.hpp"
#include "wqmc/tensor_space.hpp"
#include "wqmc/wce.hpp"
#include "wqmc/weights.hpp"

using namespace wqmc;

namespace {

UnivariateSpace anchored_r1() {
    UnivariateSpace s;
    s.flavor = Flavor::Anchored;
    s.r = 1;
    s.anchor = 0.0;
    return s;
}

void BM_plr_points(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    PolynomialLattice L;
    L.b = 2;
    L.m = m;
    L.modulus = irreducible_poly(2, m);
    L.q = {GFPoly::one(2), GFPoly(2, 0b101), GFPoly(2, 0b111), GFPoly(2, 0b1011)};
    for (auto _ : state) {
        QuadratureRule rule = plr_rule(L);
        benchmark::DoNotOptimize(rule.nodes.data());
    }
    state.SetItemsProcessed(state.iterations() * (1LL << m) * 4);
}

void BM_owen_scramble(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    PolynomialLattice L;
    L.b = 2;
    L.m = m;
    L.modulus = irreducible_poly(2, m);
    L.q = {GFPoly::one(2), GFPoly(2, 0b101), GFPoly(2, 0b111), GFPoly(2, 0b1011)};
    QuadratureRule rule = plr_rule(L);
    std::uint64_t rep = 0;
    for (auto _ : state) {
        auto pts = owen_scramble(rule.nodes, 2, 42, rep++);
        benchmark::DoNotOptimize(pts.data());
    }
    state.SetItemsProcessed(state.iterations() * (1LL << m) * 4);
}

void BM_wce(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    ProductKernel kernel(anchored_r1(), WeightSequence::poly(3.0), 4);
    PolynomialLattice L = cbc_construct(2, m, 4, kernel);
    QuadratureRule rule = plr_rule(L);
    for (auto _ : state) {
        double e = wce(rule, kernel);
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(state.iterations() * (1LL << m) * (1LL << m) / 2);
}

void BM_cbc_construct(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    ProductKernel kernel(anchored_r1(), WeightSequence::poly(3.0), 4);
    for (auto _ : state) {
        PolynomialLattice L = cbc_construct(2, m, 4, kernel);
        benchmark::DoNotOptimize(L.q.data());
    }
}

BENCHMARK(BM_plr_points)->Arg(8)->Arg(10)->Arg(12);
BENCHMARK(BM_owen_scramble)->Arg(8)->Arg(10)->Arg(12);
BENCHMARK(BM_wce)->Arg(6)->Arg(8)->Arg(10);
BENCHMARK(BM_cbc_construct)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
