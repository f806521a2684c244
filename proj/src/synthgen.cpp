#include "sstc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

#include "sstc/error.hpp"

namespace sstc {

using nlohmann::json;

namespace {

bool nested(const Taxonomy& t, FeatureId a, FeatureId b) {
  return t.in_subtree(a, b) || t.in_subtree(b, a);
}

std::size_t planted_count(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::lround(fraction * static_cast<double>(count)));
}

Error invalid(const std::string& what) { return Error(ErrorCode::InvalidSpec, what); }

}  // namespace

std::size_t SynthSpec::count_of(FeatureId leaf) const {
  for (const auto& [f, n] : per_leaf_counts) {
    if (f == leaf) return n;
  }
  return 0;
}

void SynthSpec::validate() const {
  try {
    area.validate();
  } catch (const Error& e) {
    throw invalid(e.what());
  }
  const auto leaves = taxonomy.leaves();
  if (per_leaf_counts.size() != leaves.size()) {
    throw invalid("per_leaf_counts must list every taxonomy leaf exactly once");
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (per_leaf_counts[i].first != leaves[i]) {
      throw invalid("per_leaf_counts must list every taxonomy leaf exactly once");
    }
  }

  std::map<FeatureId, std::size_t> used;
  for (const auto& p : planted) {
    if (p.anchor.value >= taxonomy.size() || p.planted.value >= taxonomy.size()) {
      throw invalid("planted feature not in taxonomy");
    }
    if (nested(taxonomy, p.anchor, p.planted)) {
      throw invalid("planted pair \"" + taxonomy.name(p.anchor) + "\" / \"" +
                    taxonomy.name(p.planted) + "\" is nested");
    }
    if (!(p.pairing_fraction >= 0.0 && p.pairing_fraction <= 1.0)) {
      throw invalid("pairing_fraction must lie in [0,1]");
    }
    if (!(p.pair_distance > 0.0) || !(p.pair_distance < std::min(area.width(), area.height()))) {
      throw invalid("pair_distance must be positive and below the area's shorter side");
    }
    for (const auto leaf : taxonomy.leaf_descendants(p.planted)) {
      used[leaf] += planted_count(p.pairing_fraction, count_of(leaf));
      if (used[leaf] > count_of(leaf)) {
        throw invalid("planted fractions for \"" + taxonomy.name(leaf) + "\" exceed its count");
      }
    }
    std::size_t anchors = 0;
    for (const auto leaf : taxonomy.leaf_descendants(p.anchor)) anchors += count_of(leaf);
    if (anchors == 0 && p.pairing_fraction > 0.0) {
      throw invalid("anchor \"" + taxonomy.name(p.anchor) + "\" has no instances");
    }
  }
  for (const auto& [a, b] : candidates) {
    if (a.value >= taxonomy.size() || b.value >= taxonomy.size() || nested(taxonomy, a, b)) {
      throw invalid("invalid candidate pattern");
    }
  }
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    SynthSpec spec;
    const auto& area = doc.at("area");
    spec.area = StudyArea{area.at("min_x").get<double>(), area.at("min_y").get<double>(),
                          area.at("max_x").get<double>(), area.at("max_y").get<double>()};
    spec.taxonomy = Taxonomy::parse(doc.at("taxonomy").dump());

    const auto& counts = doc.at("per_leaf_counts");
    for (const auto leaf : spec.taxonomy.leaves()) {
      const auto it = counts.find(spec.taxonomy.name(leaf));
      if (it == counts.end()) {
        throw invalid("per_leaf_counts is missing leaf \"" + spec.taxonomy.name(leaf) + "\"");
      }
      spec.per_leaf_counts.emplace_back(leaf, it->get<std::size_t>());
    }
    for (const auto& [name, value] : counts.items()) {
      const auto id = spec.taxonomy.find(name);
      if (!id || !spec.taxonomy.is_leaf(*id)) {
        throw invalid("per_leaf_counts names \"" + name + "\", which is not a taxonomy leaf");
      }
    }

    auto feature = [&](const json& j) {
      const auto name = j.get<std::string>();
      const auto id = spec.taxonomy.find(name);
      if (!id) throw invalid("unknown feature \"" + name + "\"");
      return *id;
    };
    if (auto it = doc.find("planted"); it != doc.end()) {
      for (const auto& p : *it) {
        spec.planted.push_back(PlantedPair{feature(p.at("anchor")), feature(p.at("planted")),
                                           p.at("pairing_fraction").get<double>(),
                                           p.at("pair_distance").get<double>()});
      }
    }
    if (auto it = doc.find("candidates"); it != doc.end()) {
      for (const auto& c : *it) {
        if (!c.is_array() || c.size() != 2) throw invalid("candidates must be feature pairs");
        spec.candidates.emplace_back(feature(c.at(0)), feature(c.at(1)));
      }
    }
    spec.seed = doc.value("seed", Seed{0});
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw invalid(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSpec) throw;
    throw invalid(e.what());
  }
}

std::string serialize_synth_spec(const SynthSpec& spec) {
  const auto& t = spec.taxonomy;
  json doc;
  doc["area"] = {{"min_x", spec.area.min_x},
                 {"min_y", spec.area.min_y},
                 {"max_x", spec.area.max_x},
                 {"max_y", spec.area.max_y}};
  doc["taxonomy"] = json::parse(t.serialize());
  json counts = json::object();
  for (const auto& [f, n] : spec.per_leaf_counts) counts[t.name(f)] = n;
  doc["per_leaf_counts"] = counts;
  json planted = json::array();
  for (const auto& p : spec.planted) {
    planted.push_back({{"anchor", t.name(p.anchor)},
                       {"planted", t.name(p.planted)},
                       {"pairing_fraction", p.pairing_fraction},
                       {"pair_distance", p.pair_distance}});
  }
  doc["planted"] = planted;
  json candidates = json::array();
  for (const auto& [a, b] : spec.candidates) candidates.push_back({t.name(a), t.name(b)});
  doc["candidates"] = candidates;
  doc["seed"] = spec.seed;
  return doc.dump(2);
}

Dataset generate(const SynthSpec& spec) { return generate(spec, spec.seed); }

Dataset generate(const SynthSpec& spec, Seed seed) {
  spec.validate();
  const auto& t = spec.taxonomy;
  const auto& area = spec.area;
  Rng rng(derive_seed(seed, 0, 0x73796e7468ULL));

  std::map<FeatureId, std::size_t> reserved;
  for (const auto& p : spec.planted) {
    for (const auto leaf : t.leaf_descendants(p.planted)) {
      reserved[leaf] += planted_count(p.pairing_fraction, spec.count_of(leaf));
    }
  }

  std::map<FeatureId, std::uint32_t> next_id;
  Dataset data;
  for (const auto& [leaf, count] : spec.per_leaf_counts) {
    const std::size_t free_count = count - reserved[leaf];
    for (std::size_t i = 0; i < free_count; ++i) {
      const Point p{uniform(rng, area.min_x, area.max_x), uniform(rng, area.min_y, area.max_y)};
      data.instances.push_back(FeatureInstance{leaf, next_id[leaf]++, p});
    }
  }

  for (const auto& planted : spec.planted) {
    for (const auto leaf : t.leaf_descendants(planted.planted)) {
      const std::size_t n = planted_count(planted.pairing_fraction, spec.count_of(leaf));
      if (n == 0) continue;
      // Anchors are whatever has been placed under the anchor feature so far.
      std::vector<Point> anchors;
      for (const auto& inst : data.instances) {
        if (t.in_subtree(planted.anchor, inst.feature)) anchors.push_back(inst.location);
      }
      if (anchors.empty()) {
        throw invalid("anchor \"" + t.name(planted.anchor) + "\" has no placed instances");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Point a = anchors[uniform_index(rng, anchors.size())];
        Point p;
        do {
          const double r = planted.pair_distance * std::sqrt(uniform01(rng));
          const double theta = 2.0 * std::numbers::pi * uniform01(rng);
          p = {a.x + r * std::cos(theta), a.y + r * std::sin(theta)};
        } while (!area.contains(p));
        data.instances.push_back(FeatureInstance{leaf, next_id[leaf]++, p});
      }
    }
  }

  std::sort(data.instances.begin(), data.instances.end(),
            [](const FeatureInstance& a, const FeatureInstance& b) {
              return instance_key(a) < instance_key(b);
            });
  return data;
}

bool is_h0_true(const SynthSpec& spec, FeaturePair pattern) {
  const auto& t = spec.taxonomy;
  for (const auto& p : spec.planted) {
    if (!(p.pairing_fraction > 0.0)) continue;
    const bool forward = nested(t, p.anchor, pattern.first) && nested(t, p.planted, pattern.second);
    const bool backward = nested(t, p.anchor, pattern.second) && nested(t, p.planted, pattern.first);
    if (forward || backward) return false;
  }
  return true;
}

std::vector<GroundTruthEntry> ground_truth(const SynthSpec& spec) {
  std::vector<GroundTruthEntry> out;
  for (const auto& c : spec.candidates) out.push_back({c, is_h0_true(spec, c)});
  return out;
}

std::string ground_truth_json(const SynthSpec& spec) {
  const auto& t = spec.taxonomy;
  json doc;
  doc["seed"] = spec.seed;
  json entries = json::array();
  for (const auto& e : ground_truth(spec)) {
    entries.push_back({{"pattern", {t.name(e.pattern.first), t.name(e.pattern.second)}},
                       {"h0_true", e.h0_true}});
  }
  doc["candidates"] = entries;
  return doc.dump(2) + "\n";
}

}  // namespace sstc
