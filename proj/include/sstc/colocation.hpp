#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sstc/geometry.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc {

/// Ordered set of distinct features with their materialized instance views.
struct CandidatePattern {
  std::vector<FeatureView> features;

  std::size_t size() const { return features.size(); }
};

/// Builds a pattern by flattening each feature against `data`.
/// Throws InvalidArgument on duplicate or nested (ancestor/descendant) features.
CandidatePattern make_pattern(const Taxonomy& t, std::span<const FeatureId> features,
                              const Dataset& data);

/// Clique instances of a pattern. Row r holds one view-local instance index per
/// pattern feature, in pattern order; rows are sorted lexicographically.
struct RowInstanceTable {
  CandidatePattern pattern;
  std::vector<std::vector<std::uint32_t>> rows;
};

/// Join-based enumeration: extend partial rows one feature at a time through the
/// adjacency of the first instance, keeping only extensions adjacent to every
/// instance already in the row. Throws PatternTooSmall when k < 2, and
/// InvalidArgument when a pattern instance is absent from the graph.
RowInstanceTable enumerate_row_instances(const CandidatePattern& pattern,
                                         const NeighborGraph& graph);

/// Fraction of the feature's view instances appearing in at least one row.
/// An empty view has ratio 0. Throws FeatureNotInPattern.
double participation_ratio(const RowInstanceTable& table, FeatureId f);

/// Minimum participation ratio over the pattern features; 0 when there are no rows.
double participation_index(const RowInstanceTable& table);

/// Participation index of a pattern whose features are taxonomy nodes, evaluated on a
/// graph built over one whole dataset. Pairs take a direct adjacency scan; larger
/// patterns go through enumerate_row_instances.
double pattern_participation_index(const NeighborGraph& graph, const Taxonomy& t,
                                   std::span<const FeatureId> features);

/// Adjacency-scan participation index for the pair (a, b); a and b must not be nested.
double pair_participation_index(const NeighborGraph& graph, const Taxonomy& t, FeatureId a,
                                FeatureId b);

/// Throws PatternTooSmall / InvalidArgument for a malformed feature list.
void validate_pattern_features(const Taxonomy& t, std::span<const FeatureId> features);

}  // namespace sstc
