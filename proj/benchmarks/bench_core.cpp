#include <benchmark/benchmark.h>

#include <memory>
#include <numeric>
#include <vector>

#include "ogclab/canonical.hpp"
#include "ogclab/complex.hpp"
#include "ogclab/enumerate.hpp"
#include "ogclab/rank.hpp"
#include "ogclab/zivkovic.hpp"

using namespace ogclab;

namespace {

std::vector<int> labels(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 1);
  return s;
}

void BM_CanonicalForm(benchmark::State& state) {
  const GraphCatalog cat = generate_oriented(1, labels(static_cast<int>(state.range(0))));
  std::vector<HalfEdgeGraph> graphs;
  for (const auto& [k, list] : cat.strata)
    for (const auto& e : list) graphs.push_back(e.graph);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_form(graphs[i]));
    i = (i + 1) % graphs.size();
  }
}
BENCHMARK(BM_CanonicalForm)->Arg(2)->Arg(3)->Arg(4);

void BM_GenerateMarked(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_marked(0, labels(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_GenerateMarked)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_GenerateOriented(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_oriented(1, labels(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_GenerateOriented)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Rank(benchmark::State& state) {
  auto cat = std::make_shared<const GraphCatalog>(generate_oriented(1, labels(4)));
  const GradedComplex c = build_complex(cat);
  const SparseIntMatrix& d = c.boundary.at(static_cast<int>(state.range(0)));
  const RankStrategy s = state.range(1) ? RankStrategy::consensus() : RankStrategy::rational();
  for (auto _ : state) benchmark::DoNotOptimize(rank(d, s));
  state.SetLabel(std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
}
BENCHMARK(BM_Rank)->Args({6, 0})->Args({6, 1})->Args({7, 1})->Unit(benchmark::kMillisecond);

void BM_Psi(benchmark::State& state) {
  const auto s = labels(static_cast<int>(state.range(0)));
  const GradedComplex m = build_complex(std::make_shared<const GraphCatalog>(generate_marked(1, s)));
  const GradedComplex o = build_complex(std::make_shared<const GraphCatalog>(generate_oriented(1, s)));
  for (auto _ : state) benchmark::DoNotOptimize(psi_matrix(m, o));
}
BENCHMARK(BM_Psi)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
