#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sstc/geometry.hpp"
#include "sstc/rng.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc {

/// R count-matched CSR datasets. Dataset i is drawn from derive_seed(seed, i), so the
/// ensemble does not depend on how the simulations are scheduled.
struct NullEnsemble {
  std::vector<Dataset> datasets;
  Seed seed = 0;
  StudyArea study_area;
  /// Leaf feature -> observed instance count, ascending by feature id.
  std::vector<std::pair<FeatureId, std::size_t>> per_feature_counts;

  std::size_t size() const { return datasets.size(); }
};

/// Per-leaf uniform placement inside `area` with the observed counts (a Poisson
/// process conditioned on its count). Parallel over simulations.
NullEnsemble generate_null_ensemble(const Dataset& observed, const StudyArea& area,
                                    std::size_t sims, Seed seed);

/// One null dataset: the i-th member of generate_null_ensemble(observed, area, ., seed).
Dataset generate_null_dataset(std::span<const std::pair<FeatureId, std::size_t>> counts,
                              const StudyArea& area, Seed seed, std::size_t index);

/// Pair correlation estimate at distance d: observed ordered-pair count with separation in
/// [d - w/2, d + w/2], divided by the CSR expectation n (n-1) A_ring / |area|.
/// No edge correction, so values near the boundary are biased low.
/// Throws TooFewInstances for n < 2 and InvalidArgument unless 0 < w <= d.
double pcf_estimate(std::span<const FeatureInstance> instances, const StudyArea& area, double d,
                    double ring_width);

struct SignificanceResult {
  std::vector<FeatureId> pattern;
  double pi_obs = 0.0;
  std::size_t count_ge = 0;
  std::size_t sims = 0;
  double p_value = 1.0;
  bool significant = false;
  double alpha = 0.05;

  friend bool operator==(const SignificanceResult&, const SignificanceResult&) = default;
};

/// (count_ge + 1) / (sims + 1).
double monte_carlo_p_value(std::size_t count_ge, std::size_t sims);

/// Counts null values >= pi_obs and applies the p <= alpha rule.
/// Throws EmptyEnsemble when null_pis is empty.
SignificanceResult assess_significance(std::vector<FeatureId> pattern, double pi_obs,
                                       std::span<const double> null_pis, double alpha);

/// Observed data and its null ensemble with neighbor graphs built once at distance d.
/// Immutable after construction and shared read-only by every test of a mining run.
class SignificanceFrame {
 public:
  SignificanceFrame(const Taxonomy& taxonomy, const Dataset& observed, const NullEnsemble& ensemble,
                    double d);

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  double distance() const { return d_; }
  std::size_t sims() const { return null_graphs_.size(); }
  const NeighborGraph& observed_graph() const { return observed_graph_; }
  const NeighborGraph& null_graph(std::size_t i) const { return null_graphs_[i]; }

 private:
  const Taxonomy* taxonomy_;
  double d_;
  NeighborGraph observed_graph_;
  std::vector<NeighborGraph> null_graphs_;
};

/// pi of the pattern in each null dataset; parallel over simulations.
std::vector<double> null_participation_indices(const SignificanceFrame& frame,
                                               std::span<const FeatureId> pattern);
/// Serial reference of null_participation_indices.
std::vector<double> null_participation_indices_serial(const SignificanceFrame& frame,
                                                      std::span<const FeatureId> pattern);

/// Monte-Carlo significance of the pattern (features are taxonomy nodes; internal nodes
/// are flattened inside the observed and every null dataset).
SignificanceResult significance_test(const SignificanceFrame& frame,
                                     std::span<const FeatureId> pattern, double alpha);
SignificanceResult significance_test_serial(const SignificanceFrame& frame,
                                            std::span<const FeatureId> pattern, double alpha);

/// Convenience form that builds the frame for a single test.
SignificanceResult significance_test(const Dataset& observed, const Taxonomy& taxonomy,
                                     std::span<const FeatureId> pattern, double d, double alpha,
                                     const NullEnsemble& ensemble);

}  // namespace sstc
