#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sstc/geometry.hpp"
#include "sstc/rng.hpp"
#include "sstc/significance.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc {

enum class MinerKind { Sstcm, FdrSstcm };

std::string_view to_string(MinerKind kind);
/// Accepts "sstcm" and "fdr-sstcm". Throws InvalidArgument.
MinerKind parse_miner_kind(std::string_view text);

struct MinerConfig {
  double d = 0.0;  ///< neighbor distance threshold, meters
  double alpha = 0.05;
  double q = 0.05;
  std::size_t sims = 99;
  Seed seed = 0;
  std::size_t min_children_pass = 3;
  bool strict_bh = false;

  /// Throws InvalidArgument.
  void validate() const;

  friend bool operator==(const MinerConfig&, const MinerConfig&) = default;
};

using FeaturePair = std::pair<FeatureId, FeatureId>;

/// One significance_test invocation. depth 0 is the candidate itself; each post-order
/// descent adds one.
struct TestRecord {
  FeaturePair pattern;
  std::size_t depth = 0;
  double pi_obs = 0.0;
  std::size_t count_ge = 0;
  std::size_t sims = 0;
  double p_value = 1.0;
  bool significant = false;

  friend bool operator==(const TestRecord&, const TestRecord&) = default;
};

/// Benjamini-Hochberg decision over the children of `parent` against `partner`.
struct BhRecord {
  FeatureId parent;
  FeatureId partner;
  std::size_t depth = 0;
  std::vector<FeatureId> children;
  std::vector<double> child_p_values;  ///< in child (document) order
  std::size_t L = 0;
  std::size_t min_children_pass = 0;
  bool passed = false;

  friend bool operator==(const BhRecord&, const BhRecord&) = default;
};

using TraceEntry = std::variant<TestRecord, BhRecord>;

struct PatternVerdict {
  FeaturePair pattern;
  bool significant = false;
  double p_value = 1.0;
  double pi_obs = 0.0;  ///< participation index of the candidate on the observed data
  std::vector<TraceEntry> trace;

  friend bool operator==(const PatternVerdict&, const PatternVerdict&) = default;
};

struct TraversalResult {
  bool significant = false;
  double p_value = 1.0;
};

/// BH rank L over the child p-values and the pass rule L >= min_children_pass.
std::pair<std::size_t, bool> bh_children_pass(std::span<const double> child_p_values, double q,
                                              std::size_t min_children_pass, bool strict);

/// Taxonomy-aware miner over one observed dataset. The null ensemble and all neighbor
/// graphs are built once at construction and reused by every candidate and recursion
/// level; both miner kinds can run against the same session.
class MiningSession {
 public:
  MiningSession(const Taxonomy& taxonomy, const Dataset& observed, const StudyArea& area,
                const MinerConfig& config);
  /// Uses a caller-supplied ensemble (e.g. a hand-built one in tests).
  MiningSession(const Taxonomy& taxonomy, const Dataset& observed, NullEnsemble ensemble,
                const MinerConfig& config);

  MiningSession(const MiningSession&) = delete;
  MiningSession& operator=(const MiningSession&) = delete;

  const MinerConfig& config() const { return config_; }
  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const NullEnsemble& ensemble() const { return ensemble_; }
  const SignificanceFrame& frame() const { return frame_; }

  /// Throws UnknownFeature for ids outside the taxonomy and InvalidArgument for nested
  /// or identical features.
  PatternVerdict mine(MinerKind kind, FeaturePair candidate);
  std::vector<PatternVerdict> mine(MinerKind kind, std::span<const FeaturePair> candidates);

  /// Leaf parent: plain test. Internal parent: post-order over its children, then the
  /// flattened-parent test on success, (false, 1) on failure.
  TraversalResult traversal(MinerKind kind, FeatureId parent, FeatureId partner,
                            std::size_t depth, std::vector<TraceEntry>& trace);
  /// Every child must be significant; stops at the first one that is not.
  bool postorder_all(MinerKind kind, FeatureId parent, FeatureId partner, std::size_t depth,
                     std::vector<TraceEntry>& trace);
  /// Tests every child, then applies BH at level q to the child p-values.
  bool postorder_bh(MinerKind kind, FeatureId parent, FeatureId partner, std::size_t depth,
                    std::vector<TraceEntry>& trace);

  /// Memoized significance test; every call appends one TestRecord.
  TestRecord test(FeatureId a, FeatureId b, std::size_t depth, std::vector<TraceEntry>& trace);

 private:
  const Taxonomy* taxonomy_;
  MinerConfig config_;
  NullEnsemble ensemble_;
  SignificanceFrame frame_;
  std::map<FeaturePair, SignificanceResult> memo_;
};

/// Baseline miner: all children of an internal node must co-locate significantly.
std::vector<PatternVerdict> sstcm(const Dataset& data, const Taxonomy& taxonomy,
                                  std::span<const FeaturePair> candidates,
                                  const MinerConfig& config, const StudyArea& area);

/// FDR miner: children are screened with Benjamini-Hochberg instead.
std::vector<PatternVerdict> fdr_sstcm(const Dataset& data, const Taxonomy& taxonomy,
                                      std::span<const FeaturePair> candidates,
                                      const MinerConfig& config, const StudyArea& area);

/// Parses "FeatureA,FeatureB". Throws PatternTooSmall, PatternTooLarge or UnknownFeature.
FeaturePair parse_candidate(const Taxonomy& taxonomy, std::string_view text);
std::string format_candidate(const Taxonomy& taxonomy, FeaturePair pattern);

/// Count of TestRecord entries in a trace.
std::size_t test_count(std::span<const TraceEntry> trace);

}  // namespace sstc
