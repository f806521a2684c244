// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <array>

#include "sstc/geometry.hpp"
#include "sstc/significance.hpp"
#include "sstc/taxonomy.hpp"

namespace {

using namespace sstc;

const char* kTaxonomy = R"({"name": "root", "children": [
  {"name": "f_A"},
  {"name": "f_B", "children": [{"name": "f_D"}, {"name": "f_E"}, {"name": "f_F"}]},
  {"name": "f_C"},
  {"name": "f_G", "children": [{"name": "f_H"}, {"name": "f_I"}, {"name": "f_J"}]}]})";

Dataset uniform_points(const Taxonomy& t, std::size_t per_leaf, double extent, Seed seed) {
  std::vector<std::pair<FeatureId, std::size_t>> counts;
  for (const auto leaf : t.leaves()) counts.emplace_back(leaf, per_leaf);
  return generate_null_dataset(counts, StudyArea{0, 0, extent, extent}, seed, 0);
}

template <bool Parallel>
void BM_NeighborPairs(benchmark::State& state) {
  const auto t = Taxonomy::parse(kTaxonomy);
  const auto data = uniform_points(t, static_cast<std::size_t>(state.range(0)), 1000.0, 1);
  for (auto _ : state) {
    auto g = Parallel ? neighbor_pairs(data.instances, 15.0) : neighbor_pairs_serial(data.instances, 15.0);
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}

template <bool Parallel>
void BM_NullParticipation(benchmark::State& state) {
  const auto t = Taxonomy::parse(kTaxonomy);
  const auto data = uniform_points(t, static_cast<std::size_t>(state.range(0)), 1000.0, 2);
  const auto ens = generate_null_ensemble(data, StudyArea{0, 0, 1000, 1000}, 99, 3);
  const SignificanceFrame frame(t, data, ens, 30.0);
  const std::array<FeatureId, 2> pattern{t.id_of("f_B"), t.id_of("f_H")};
  for (auto _ : state) {
    auto v = Parallel ? null_participation_indices(frame, pattern)
                      : null_participation_indices_serial(frame, pattern);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(BM_NeighborPairs<true>)->Arg(100)->Arg(1000)->Arg(5000);
BENCHMARK(BM_NeighborPairs<false>)->Arg(100)->Arg(1000)->Arg(5000);
BENCHMARK(BM_NullParticipation<true>)->Arg(100)->Arg(400);
BENCHMARK(BM_NullParticipation<false>)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
