#include <benchmark/benchmark.h>

#include <random>

#include "tolquot/iso_search.hpp"
#include "tolquot/quotients.hpp"
#include "tolquot/realization.hpp"

using namespace tolquot;

namespace {

MultiAlgebra random_multialgebra(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << n) - 1);
  std::vector<NamedTable<MultiOperationTable>> ops;
  MultiOperationTable u{1, {}};
  for (std::size_t i = 0; i < n; ++i) {
    u.entries.push_back(ElementSet::from_mask(n, pick(rng)));
  }
  MultiOperationTable p{2, {}};
  for (std::size_t i = 0; i < n * n; ++i) {
    p.entries.push_back(ElementSet::from_mask(n, pick(rng)));
  }
  return MultiAlgebra(n, {{"f", std::move(u)}, {"+", std::move(p)}});
}

MultiAlgebra pair_groupoid() {
  std::vector<ElementSet> t;
  for (ElementId a = 0; a < 3; ++a) {
    for (ElementId b = 0; b < 3; ++b) {
      t.push_back(ElementSet::of(3, {a, b}));
    }
  }
  return MultiAlgebra(3, {{"+", MultiOperationTable{2, std::move(t)}}});
}

void BM_MaximalCliquesNondisjoint(benchmark::State& state) {
  auto const nu = nondisjointness(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_cliques(nu));
  }
}
BENCHMARK(BM_MaximalCliquesNondisjoint)->DenseRange(3, 5);

void BM_SubstitutionCheck(benchmark::State& state) {
  auto const m = random_multialgebra(static_cast<std::size_t>(state.range(0)), 11);
  auto const alg = powerset_algebra(m);
  auto const nu = nondisjointness(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_tolerance(alg, nu));
  }
}
BENCHMARK(BM_SubstitutionCheck)->DenseRange(3, 6);

void BM_FullCoveringQuotient(benchmark::State& state) {
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const m = random_multialgebra(n, 13);
  auto const alg = powerset_algebra(m);
  auto const nu = nondisjointness(static_cast<unsigned>(n));
  auto const filters = principal_filter_covering(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_covering_quotient(alg, nu, filters));
  }
}
BENCHMARK(BM_FullCoveringQuotient)->DenseRange(3, 6);

void BM_Realize(benchmark::State& state) {
  auto const m = random_multialgebra(static_cast<std::size_t>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize(m));
  }
}
BENCHMARK(BM_Realize)->DenseRange(2, 5);

void BM_AreIsomorphic(benchmark::State& state) {
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const a = random_multialgebra(n, 19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(are_isomorphic(a, a));
  }
}
BENCHMARK(BM_AreIsomorphic)->DenseRange(3, 6);

void BM_ToleranceSearchExhaustsBound4(benchmark::State& state) {
  auto const target = pair_groupoid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_tolerance_representation(target, 4));
  }
}
BENCHMARK(BM_ToleranceSearchExhaustsBound4);

void BM_FullCoveringSearchBound7(benchmark::State& state) {
  auto const target = pair_groupoid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_full_covering_representation(target, 7));
  }
}
BENCHMARK(BM_FullCoveringSearchBound7);

void BM_DeterminacySweep(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_unary_determinacy(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_DeterminacySweep)->DenseRange(3, 4);

}  // namespace

BENCHMARK_MAIN();
