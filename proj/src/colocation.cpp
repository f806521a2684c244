#include "sstc/colocation.hpp"

#include <algorithm>
#include <string>

#include "sstc/error.hpp"

namespace sstc {

void validate_pattern_features(const Taxonomy& t, std::span<const FeatureId> features) {
  if (features.size() < 2) {
    throw Error(ErrorCode::PatternTooSmall, "a co-location pattern needs at least 2 features");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].value >= t.size()) {
      throw Error(ErrorCode::UnknownFeature, "feature id " + std::to_string(features[i].value));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (features[i] == features[j]) {
        throw Error(ErrorCode::InvalidArgument, "duplicate feature \"" + t.name(features[i]) + "\"");
      }
      if (t.in_subtree(features[i], features[j]) || t.in_subtree(features[j], features[i])) {
        throw Error(ErrorCode::InvalidArgument, "features \"" + t.name(features[j]) + "\" and \"" +
                                                    t.name(features[i]) + "\" are nested");
      }
    }
  }
}

CandidatePattern make_pattern(const Taxonomy& t, std::span<const FeatureId> features,
                              const Dataset& data) {
  validate_pattern_features(t, features);
  CandidatePattern p;
  p.features.reserve(features.size());
  for (const auto f : features) p.features.push_back(flatten(t, f, data));
  return p;
}

RowInstanceTable enumerate_row_instances(const CandidatePattern& pattern,
                                         const NeighborGraph& graph) {
  const std::size_t k = pattern.size();
  if (k < 2) throw Error(ErrorCode::PatternTooSmall, "a co-location pattern needs at least 2 features");

  // local[f][node] = index of graph node within view f, or -1.
  const std::size_t n = graph.nodes().size();
  std::vector<std::vector<std::int32_t>> local(k, std::vector<std::int32_t>(n, -1));
  std::vector<std::vector<std::uint32_t>> node_of(k);
  for (std::size_t f = 0; f < k; ++f) {
    const auto& view = pattern.features[f].instances;
    node_of[f].reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
      auto node = graph.node_index(view[i]);
      if (!node) {
        throw Error(ErrorCode::InvalidArgument, "pattern instance missing from neighbor graph");
      }
      local[f][*node] = static_cast<std::int32_t>(i);
      node_of[f].push_back(*node);
    }
  }

  std::vector<std::vector<std::uint32_t>> rows;
  for (std::uint32_t i = 0; i < node_of[0].size(); ++i) rows.push_back({i});

  for (std::size_t f = 1; f < k; ++f) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& row : rows) {
      const std::uint32_t first = node_of[0][row[0]];
      for (const auto v : graph.neighbors(first)) {
        const auto li = local[f][v];
        if (li < 0) continue;
        bool clique = true;
        for (std::size_t g = 1; g < row.size() && clique; ++g) {
          const std::uint32_t u = node_of[g][row[g]];
          clique = u != v && graph.has_edge(u, v);
        }
        if (!clique) continue;
        auto extended = row;
        extended.push_back(static_cast<std::uint32_t>(li));
        next.push_back(std::move(extended));
      }
    }
    rows = std::move(next);
  }

  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return RowInstanceTable{pattern, std::move(rows)};
}

double participation_ratio(const RowInstanceTable& table, FeatureId f) {
  const auto& feats = table.pattern.features;
  auto it = std::find_if(feats.begin(), feats.end(),
                         [&](const FeatureView& v) { return v.feature == f; });
  if (it == feats.end()) {
    throw Error(ErrorCode::FeatureNotInPattern, "feature id " + std::to_string(f.value));
  }
  const std::size_t col = static_cast<std::size_t>(it - feats.begin());
  const std::size_t total = it->instances.size();
  if (total == 0) return 0.0;
  std::vector<char> seen(total, 0);
  std::size_t distinct = 0;
  for (const auto& row : table.rows) {
    if (!seen[row[col]]) {
      seen[row[col]] = 1;
      ++distinct;
    }
  }
  return static_cast<double>(distinct) / static_cast<double>(total);
}

double participation_index(const RowInstanceTable& table) {
  if (table.rows.empty() || table.pattern.features.empty()) return 0.0;
  double pi = 1.0;
  for (const auto& view : table.pattern.features) {
    pi = std::min(pi, participation_ratio(table, view.feature));
  }
  return pi;
}

double pair_participation_index(const NeighborGraph& graph, const Taxonomy& t, FeatureId a,
                                FeatureId b) {
  const auto nodes = graph.nodes();
  std::vector<char> b_hit(nodes.size(), 0);
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::size_t hit_a = 0;
  std::size_t hit_b = 0;
  for (std::uint32_t u = 0; u < nodes.size(); ++u) {
    const FeatureId fu = nodes[u].feature;
    if (t.in_subtree(b, fu)) {
      ++count_b;
      continue;
    }
    if (!t.in_subtree(a, fu)) continue;
    ++count_a;
    bool participates = false;
    for (const auto v : graph.neighbors(u)) {
      if (!t.in_subtree(b, nodes[v].feature)) continue;
      participates = true;
      if (!b_hit[v]) {
        b_hit[v] = 1;
        ++hit_b;
      }
    }
    if (participates) ++hit_a;
  }
  if (count_a == 0 || count_b == 0) return 0.0;
  const double pr_a = static_cast<double>(hit_a) / static_cast<double>(count_a);
  const double pr_b = static_cast<double>(hit_b) / static_cast<double>(count_b);
  return std::min(pr_a, pr_b);
}

double pattern_participation_index(const NeighborGraph& graph, const Taxonomy& t,
                                   std::span<const FeatureId> features) {
  validate_pattern_features(t, features);
  if (features.size() == 2) return pair_participation_index(graph, t, features[0], features[1]);
  const Dataset nodes{{graph.nodes().begin(), graph.nodes().end()}};
  return participation_index(enumerate_row_instances(make_pattern(t, features, nodes), graph));
}

}  // namespace sstc
