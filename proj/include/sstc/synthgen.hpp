#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sstc/geometry.hpp"
#include "sstc/miners.hpp"
#include "sstc/rng.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc {

/// Instances under `planted` are placed near instances under `anchor`: for every leaf
/// under `planted`, round(pairing_fraction * count(leaf)) of its instances go uniformly
/// into a disc of radius pair_distance around a uniformly chosen anchor instance.
/// Both sides may be internal nodes.
struct PlantedPair {
  FeatureId anchor;
  FeatureId planted;
  double pairing_fraction = 0.0;
  double pair_distance = 0.0;

  friend bool operator==(const PlantedPair&, const PlantedPair&) = default;
};

struct SynthSpec {
  StudyArea area;
  Taxonomy taxonomy;
  /// One entry per taxonomy leaf, in leaf order.
  std::vector<std::pair<FeatureId, std::size_t>> per_leaf_counts;
  std::vector<PlantedPair> planted;
  /// Candidate patterns labelled in the ground-truth sidecar.
  std::vector<FeaturePair> candidates;
  Seed seed = 0;

  /// Throws InvalidSpec.
  void validate() const;
  std::size_t count_of(FeatureId leaf) const;
};

/// JSON form:
/// {"area": {"min_x","min_y","max_x","max_y"}, "taxonomy": <taxonomy node>,
///  "per_leaf_counts": {"leaf": n, ...},
///  "planted": [{"anchor": "f", "planted": "g", "pairing_fraction": 0.5, "pair_distance": 10}],
///  "candidates": [["f", "g"], ...], "seed": 7}
/// Throws InvalidSpec (or ParseError for malformed JSON).
SynthSpec parse_synth_spec(std::string_view json_text);
std::string serialize_synth_spec(const SynthSpec& spec);

/// Free instances of every leaf are placed first (uniform in the area), then each
/// planted pair in spec order. Output is sorted by (leaf, id).
Dataset generate(const SynthSpec& spec);
/// Same, with `seed` replacing spec.seed.
Dataset generate(const SynthSpec& spec, Seed seed);

struct GroundTruthEntry {
  FeaturePair pattern;
  bool h0_true = true;

  friend bool operator==(const GroundTruthEntry&, const GroundTruthEntry&) = default;
};

/// A candidate is H0-false when some planted pair with positive fraction links a leaf
/// under one of its features to a leaf under the other.
std::vector<GroundTruthEntry> ground_truth(const SynthSpec& spec);
bool is_h0_true(const SynthSpec& spec, FeaturePair pattern);
std::string ground_truth_json(const SynthSpec& spec);

}  // namespace sstc
