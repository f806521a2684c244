#include "sstc/miners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sstc/colocation.hpp"
#include "sstc/error.hpp"
#include "sstc/multiple_testing.hpp"

namespace sstc {

std::string_view to_string(MinerKind kind) {
  return kind == MinerKind::Sstcm ? "sstcm" : "fdr-sstcm";
}

MinerKind parse_miner_kind(std::string_view text) {
  if (text == "sstcm") return MinerKind::Sstcm;
  if (text == "fdr-sstcm") return MinerKind::FdrSstcm;
  throw Error(ErrorCode::InvalidArgument, "unknown miner \"" + std::string(text) + "\"");
}

void MinerConfig::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw Error(ErrorCode::InvalidArgument, "distance must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::InvalidArgument, "q must lie in (0,1)");
  if (sims < 1) throw Error(ErrorCode::InvalidArgument, "sims must be at least 1");
  if (min_children_pass < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_children_pass must be at least 1");
  }
}

std::pair<std::size_t, bool> bh_children_pass(std::span<const double> child_p_values, double q,
                                              std::size_t min_children_pass, bool strict) {
  const BhOutcome bh = bh_select(child_p_values, q, strict);
  // Fails when L <= min_children_pass - 1; the default of 3 gives the L <= 2 rule.
  return {bh.L, bh.L >= min_children_pass};
}

MiningSession::MiningSession(const Taxonomy& taxonomy, const Dataset& observed,
                             const StudyArea& area, const MinerConfig& config)
    : MiningSession(taxonomy, observed,
                    generate_null_ensemble(observed, area, config.sims, config.seed), config) {}

MiningSession::MiningSession(const Taxonomy& taxonomy, const Dataset& observed,
                             NullEnsemble ensemble, const MinerConfig& config)
    : taxonomy_(&taxonomy),
      config_((config.validate(), config)),
      ensemble_(std::move(ensemble)),
      frame_(taxonomy, observed, ensemble_, config.d) {
  if (ensemble_.size() == 0) throw Error(ErrorCode::EmptyEnsemble, "no null simulations");
}

TestRecord MiningSession::test(FeatureId a, FeatureId b, std::size_t depth,
                               std::vector<TraceEntry>& trace) {
  const FeaturePair key = std::minmax(a, b);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    const std::array<FeatureId, 2> pattern{key.first, key.second};
    it = memo_.emplace(key, significance_test(frame_, pattern, config_.alpha)).first;
  }
  const SignificanceResult& r = it->second;
  TestRecord rec{{a, b}, depth, r.pi_obs, r.count_ge, r.sims, r.p_value, r.significant};
  trace.emplace_back(rec);
  return rec;
}

TraversalResult MiningSession::traversal(MinerKind kind, FeatureId parent, FeatureId partner,
                                         std::size_t depth, std::vector<TraceEntry>& trace) {
  if (taxonomy_->is_leaf(parent)) {
    const auto rec = test(parent, partner, depth, trace);
    return {rec.significant, rec.p_value};
  }
  const bool children_ok = kind == MinerKind::Sstcm
                               ? postorder_all(kind, parent, partner, depth + 1, trace)
                               : postorder_bh(kind, parent, partner, depth + 1, trace);
  if (!children_ok) return {false, 1.0};
  const auto rec = test(parent, partner, depth, trace);
  return {rec.significant, rec.p_value};
}

bool MiningSession::postorder_all(MinerKind kind, FeatureId parent, FeatureId partner,
                                  std::size_t depth, std::vector<TraceEntry>& trace) {
  for (const auto child : taxonomy_->children(parent)) {
    if (!traversal(kind, child, partner, depth, trace).significant) return false;
  }
  return true;
}

bool MiningSession::postorder_bh(MinerKind kind, FeatureId parent, FeatureId partner,
                                 std::size_t depth, std::vector<TraceEntry>& trace) {
  BhRecord rec;
  rec.parent = parent;
  rec.partner = partner;
  rec.depth = depth;
  rec.min_children_pass = config_.min_children_pass;
  for (const auto child : taxonomy_->children(parent)) {
    rec.children.push_back(child);
    rec.child_p_values.push_back(traversal(kind, child, partner, depth, trace).p_value);
  }
  std::tie(rec.L, rec.passed) = bh_children_pass(rec.child_p_values, config_.q,
                                                 config_.min_children_pass, config_.strict_bh);
  const bool passed = rec.passed;
  trace.emplace_back(std::move(rec));
  return passed;
}

PatternVerdict MiningSession::mine(MinerKind kind, FeaturePair candidate) {
  const std::array<FeatureId, 2> features{candidate.first, candidate.second};
  validate_pattern_features(*taxonomy_, features);

  PatternVerdict v;
  v.pattern = candidate;
  v.pi_obs = pattern_participation_index(frame_.observed_graph(), *taxonomy_, features);

  const auto [f1, f2] = candidate;
  const bool leaf1 = taxonomy_->is_leaf(f1);
  const bool leaf2 = taxonomy_->is_leaf(f2);
  TraversalResult result;
  if (leaf1 && leaf2) {
    const auto rec = test(f1, f2, 0, v.trace);
    result = {rec.significant, rec.p_value};
  } else if (leaf1 || leaf2) {
    const FeatureId parent = leaf1 ? f2 : f1;
    const FeatureId leaf = leaf1 ? f1 : f2;
    result = traversal(kind, parent, leaf, 0, v.trace);
  } else {
    // Both internal: each side is traversed against the other, flattened.
    const auto first = traversal(kind, f1, f2, 0, v.trace);
    const auto second = traversal(kind, f2, f1, 0, v.trace);
    if (first.significant && second.significant) {
      const auto rec = test(f1, f2, 0, v.trace);
      result = {rec.significant, rec.p_value};
    } else {
      result = {false, 1.0};
    }
  }
  v.significant = result.significant;
  v.p_value = result.p_value;
  return v;
}

std::vector<PatternVerdict> MiningSession::mine(MinerKind kind,
                                                std::span<const FeaturePair> candidates) {
  std::vector<PatternVerdict> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(mine(kind, c));
  return out;
}

std::vector<PatternVerdict> sstcm(const Dataset& data, const Taxonomy& taxonomy,
                                  std::span<const FeaturePair> candidates,
                                  const MinerConfig& config, const StudyArea& area) {
  MiningSession session(taxonomy, data, area, config);
  return session.mine(MinerKind::Sstcm, candidates);
}

std::vector<PatternVerdict> fdr_sstcm(const Dataset& data, const Taxonomy& taxonomy,
                                      std::span<const FeaturePair> candidates,
                                      const MinerConfig& config, const StudyArea& area) {
  MiningSession session(taxonomy, data, area, config);
  return session.mine(MinerKind::FdrSstcm, candidates);
}

FeaturePair parse_candidate(const Taxonomy& taxonomy, std::string_view text) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    names.emplace_back(part);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (names.size() < 2) {
    throw Error(ErrorCode::PatternTooSmall, "pattern \"" + std::string(text) + "\" needs two features");
  }
  if (names.size() > 2) {
    throw Error(ErrorCode::PatternTooLarge,
                "pattern \"" + std::string(text) + "\" has more than two features");
  }
  const FeaturePair pair{taxonomy.id_of(names[0]), taxonomy.id_of(names[1])};
  const std::array<FeatureId, 2> features{pair.first, pair.second};
  validate_pattern_features(taxonomy, features);
  return pair;
}

std::string format_candidate(const Taxonomy& taxonomy, FeaturePair pattern) {
  return taxonomy.name(pattern.first) + "," + taxonomy.name(pattern.second);
}

std::size_t test_count(std::span<const TraceEntry> trace) {
  return static_cast<std::size_t>(std::count_if(trace.begin(), trace.end(), [](const TraceEntry& e) {
    return std::holds_alternative<TestRecord>(e);
  }));
}

}  // namespace sstc
