#include "sstc/significance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "sstc/colocation.hpp"
#include "sstc/error.hpp"

namespace sstc {

Dataset generate_null_dataset(std::span<const std::pair<FeatureId, std::size_t>> counts,
                              const StudyArea& area, Seed seed, std::size_t index) {
  Rng rng(derive_seed(seed, index));
  Dataset out;
  std::size_t total = 0;
  for (const auto& [f, n] : counts) total += n;
  out.instances.reserve(total);
  for (const auto& [f, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = uniform(rng, area.min_x, area.max_x);
      const double y = uniform(rng, area.min_y, area.max_y);
      out.instances.push_back(FeatureInstance{f, static_cast<std::uint32_t>(i), {x, y}});
    }
  }
  return out;
}

NullEnsemble generate_null_ensemble(const Dataset& observed, const StudyArea& area,
                                    std::size_t sims, Seed seed) {
  if (sims < 1) throw Error(ErrorCode::InvalidArgument, "simulation count must be at least 1");
  if (observed.empty()) throw Error(ErrorCode::InvalidArgument, "observed dataset is empty");
  area.validate();

  std::map<FeatureId, std::size_t> counts;
  for (const auto& inst : observed.instances) ++counts[inst.feature];

  NullEnsemble ens;
  ens.seed = seed;
  ens.study_area = area;
  ens.per_feature_counts.assign(counts.begin(), counts.end());
  ens.datasets.resize(sims);

  const auto n = static_cast<std::int64_t>(sims);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    ens.datasets[static_cast<std::size_t>(i)] =
        generate_null_dataset(ens.per_feature_counts, area, seed, static_cast<std::size_t>(i));
  }
  return ens;
}

double pcf_estimate(std::span<const FeatureInstance> instances, const StudyArea& area, double d,
                    double ring_width) {
  if (instances.size() < 2) {
    throw Error(ErrorCode::TooFewInstances, "pair correlation needs at least 2 instances");
  }
  if (!(ring_width > 0.0) || !(ring_width <= d)) {
    throw Error(ErrorCode::InvalidArgument, "ring width must satisfy 0 < w <= d");
  }
  area.validate();
  const double inner = d - ring_width / 2.0;
  const double outer = d + ring_width / 2.0;

  const NeighborGraph graph = neighbor_pairs_serial(instances, outer);
  std::size_t in_ring = 0;
  for (const auto& [a, b] : graph.edges()) {
    if (squared_distance(instances[a].location, instances[b].location) >= inner * inner) {
      ++in_ring;
    }
  }
  const double n = static_cast<double>(instances.size());
  const double ring_area = std::numbers::pi * (outer * outer - inner * inner);
  const double expected_ordered = n * (n - 1.0) * ring_area / area.area();
  return 2.0 * static_cast<double>(in_ring) / expected_ordered;
}

double monte_carlo_p_value(std::size_t count_ge, std::size_t sims) {
  return static_cast<double>(count_ge + 1) / static_cast<double>(sims + 1);
}

SignificanceResult assess_significance(std::vector<FeatureId> pattern, double pi_obs,
                                       std::span<const double> null_pis, double alpha) {
  if (null_pis.empty()) throw Error(ErrorCode::EmptyEnsemble, "no null simulations");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  }
  SignificanceResult r;
  r.pattern = std::move(pattern);
  r.pi_obs = pi_obs;
  r.sims = null_pis.size();
  r.count_ge = static_cast<std::size_t>(
      std::count_if(null_pis.begin(), null_pis.end(), [&](double v) { return v >= pi_obs; }));
  r.p_value = monte_carlo_p_value(r.count_ge, r.sims);
  r.alpha = alpha;
  r.significant = r.p_value <= alpha;
  return r;
}

SignificanceFrame::SignificanceFrame(const Taxonomy& taxonomy, const Dataset& observed,
                                     const NullEnsemble& ensemble, double d)
    : taxonomy_(&taxonomy), d_(d), observed_graph_(neighbor_pairs(observed.instances, d)) {
  null_graphs_.resize(ensemble.size());
  const auto n = static_cast<std::int64_t>(ensemble.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    null_graphs_[idx] = neighbor_pairs_serial(ensemble.datasets[idx].instances, d);
  }
}

std::vector<double> null_participation_indices(const SignificanceFrame& frame,
                                               std::span<const FeatureId> pattern) {
  validate_pattern_features(frame.taxonomy(), pattern);
  std::vector<double> out(frame.sims());
  const auto n = static_cast<std::int64_t>(frame.sims());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = pattern_participation_index(frame.null_graph(idx), frame.taxonomy(), pattern);
  }
  return out;
}

std::vector<double> null_participation_indices_serial(const SignificanceFrame& frame,
                                                      std::span<const FeatureId> pattern) {
  validate_pattern_features(frame.taxonomy(), pattern);
  std::vector<double> out(frame.sims());
  for (std::size_t i = 0; i < frame.sims(); ++i) {
    out[i] = pattern_participation_index(frame.null_graph(i), frame.taxonomy(), pattern);
  }
  return out;
}

SignificanceResult significance_test(const SignificanceFrame& frame,
                                     std::span<const FeatureId> pattern, double alpha) {
  const double pi_obs =
      pattern_participation_index(frame.observed_graph(), frame.taxonomy(), pattern);
  const auto nulls = null_participation_indices(frame, pattern);
  return assess_significance({pattern.begin(), pattern.end()}, pi_obs, nulls, alpha);
}

SignificanceResult significance_test_serial(const SignificanceFrame& frame,
                                            std::span<const FeatureId> pattern, double alpha) {
  const double pi_obs =
      pattern_participation_index(frame.observed_graph(), frame.taxonomy(), pattern);
  const auto nulls = null_participation_indices_serial(frame, pattern);
  return assess_significance({pattern.begin(), pattern.end()}, pi_obs, nulls, alpha);
}

SignificanceResult significance_test(const Dataset& observed, const Taxonomy& taxonomy,
                                     std::span<const FeatureId> pattern, double d, double alpha,
                                     const NullEnsemble& ensemble) {
  if (ensemble.size() == 0) throw Error(ErrorCode::EmptyEnsemble, "no null simulations");
  const SignificanceFrame frame(taxonomy, observed, ensemble, d);
  return significance_test(frame, pattern, alpha);
}

}  // namespace sstc
