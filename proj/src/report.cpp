#include "sstc/report.hpp"

#include <sstream>

#include <json.hpp>

#include "sstc/dataset_io.hpp"
#include "sstc/error.hpp"

namespace sstc {

using nlohmann::ordered_json;

namespace {

ordered_json pair_json(const Taxonomy& t, FeaturePair p) {
  return ordered_json::array({t.name(p.first), t.name(p.second)});
}

ordered_json config_json(const MinerConfig& c) {
  return ordered_json{{"distance", c.d},
                      {"alpha", c.alpha},
                      {"q", c.q},
                      {"sims", c.sims},
                      {"seed", c.seed},
                      {"min_children_pass", c.min_children_pass},
                      {"strict_bh", c.strict_bh}};
}

ordered_json trace_json(const Taxonomy& t, const TraceEntry& entry) {
  if (const auto* test = std::get_if<TestRecord>(&entry)) {
    return ordered_json{{"kind", "test"},
                        {"pattern", pair_json(t, test->pattern)},
                        {"depth", test->depth},
                        {"pi_obs", test->pi_obs},
                        {"count_ge", test->count_ge},
                        {"sims", test->sims},
                        {"p_value", test->p_value},
                        {"significant", test->significant}};
  }
  const auto& bh = std::get<BhRecord>(entry);
  ordered_json kids = ordered_json::array();
  for (const auto c : bh.children) kids.push_back(t.name(c));
  return ordered_json{{"kind", "bh"},
                      {"parent", t.name(bh.parent)},
                      {"partner", t.name(bh.partner)},
                      {"depth", bh.depth},
                      {"children", kids},
                      {"child_p_values", bh.child_p_values},
                      {"L", bh.L},
                      {"min_children_pass", bh.min_children_pass},
                      {"passed", bh.passed}};
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string mine_report_json(const MineRunInfo& info, const Taxonomy& taxonomy,
                             std::span<const PatternVerdict> verdicts) {
  ordered_json doc;
  ordered_json cfg{{"instances", info.instances_path},
                   {"taxonomy", info.taxonomy_path},
                   {"miner", std::string(to_string(info.miner))}};
  const ordered_json config_fields = config_json(info.config);
  for (const auto& [k, v] : config_fields.items()) cfg[k] = v;
  cfg["study_area"] = {{"min_x", info.area.min_x},
                       {"min_y", info.area.min_y},
                       {"max_x", info.area.max_x},
                       {"max_y", info.area.max_y},
                       {"source", info.area_from_data ? "bounding_box" : "user"}};
  cfg["patterns"] = info.patterns;
  cfg["format"] = info.format;
  doc["config"] = cfg;

  ordered_json pcf = ordered_json::array();
  for (const auto& [f, g] : info.pcf) {
    pcf.push_back({{"feature", taxonomy.name(f)}, {"g", g}});
  }
  doc["diagnostics"] = {{"pcf_distance", info.config.d},
                        {"pcf_ring_width", info.pcf_ring_width},
                        {"pcf", pcf}};

  ordered_json out = ordered_json::array();
  for (const auto& v : verdicts) {
    ordered_json trace = ordered_json::array();
    for (const auto& e : v.trace) trace.push_back(trace_json(taxonomy, e));
    out.push_back({{"pattern", pair_json(taxonomy, v.pattern)},
                   {"pi_obs", v.pi_obs},
                   {"p_value", v.p_value},
                   {"significant", v.significant},
                   {"trace", trace}});
  }
  doc["verdicts"] = out;
  return doc.dump(2) + "\n";
}

std::string mine_report_csv(const MineRunInfo& info, const Taxonomy& taxonomy,
                            std::span<const PatternVerdict> verdicts) {
  std::ostringstream os;
  os << "# instances=" << info.instances_path << '\n'
     << "# taxonomy=" << info.taxonomy_path << '\n'
     << "# miner=" << to_string(info.miner) << '\n'
     << "# distance=" << format_double(info.config.d) << '\n'
     << "# alpha=" << format_double(info.config.alpha) << '\n'
     << "# q=" << format_double(info.config.q) << '\n'
     << "# sims=" << info.config.sims << '\n'
     << "# seed=" << info.config.seed << '\n'
     << "# min_children_pass=" << info.config.min_children_pass << '\n'
     << "# strict_bh=" << bool_str(info.config.strict_bh) << '\n'
     << "# study_area=" << format_double(info.area.min_x) << ',' << format_double(info.area.min_y)
     << ',' << format_double(info.area.max_x) << ',' << format_double(info.area.max_y) << " ("
     << (info.area_from_data ? "bounding_box" : "user") << ")\n";
  for (const auto& p : info.patterns) os << "# pattern=" << p << '\n';
  for (const auto& [f, g] : info.pcf) {
    os << "# pcf[" << taxonomy.name(f) << "]=" << format_double(g) << '\n';
  }
  os << "pattern,row,depth,tested,pi_obs,count_ge,sims,p_value,significant,L,child_p_values\n";
  for (const auto& v : verdicts) {
    const std::string pat = csv_quote(format_candidate(taxonomy, v.pattern));
    os << pat << ",verdict,,," << format_double(v.pi_obs) << ",,," << format_double(v.p_value)
       << ',' << bool_str(v.significant) << ",,\n";
    for (const auto& e : v.trace) {
      if (const auto* t = std::get_if<TestRecord>(&e)) {
        os << pat << ",test," << t->depth << ',' << csv_quote(format_candidate(taxonomy, t->pattern))
           << ',' << format_double(t->pi_obs) << ',' << t->count_ge << ',' << t->sims << ','
           << format_double(t->p_value) << ',' << bool_str(t->significant) << ",,\n";
      } else {
        const auto& bh = std::get<BhRecord>(e);
        std::string ps;
        for (std::size_t i = 0; i < bh.child_p_values.size(); ++i) {
          if (i) ps += ';';
          ps += format_double(bh.child_p_values[i]);
        }
        os << pat << ",bh," << bh.depth << ','
           << csv_quote(taxonomy.name(bh.parent) + "," + taxonomy.name(bh.partner)) << ",,,,,"
           << bool_str(bh.passed) << ',' << bh.L << ',' << ps << '\n';
      }
    }
  }
  return os.str();
}

std::vector<PatternVerdict> parse_mine_report(std::string_view json_text, const Taxonomy& taxonomy) {
  try {
    const auto doc = ordered_json::parse(json_text);
    auto pair = [&](const ordered_json& j) {
      return FeaturePair{taxonomy.id_of(j.at(0).get<std::string>()),
                         taxonomy.id_of(j.at(1).get<std::string>())};
    };
    std::vector<PatternVerdict> out;
    for (const auto& jv : doc.at("verdicts")) {
      PatternVerdict v;
      v.pattern = pair(jv.at("pattern"));
      v.pi_obs = jv.at("pi_obs").get<double>();
      v.p_value = jv.at("p_value").get<double>();
      v.significant = jv.at("significant").get<bool>();
      for (const auto& je : jv.at("trace")) {
        if (je.at("kind") == "test") {
          v.trace.emplace_back(TestRecord{pair(je.at("pattern")), je.at("depth").get<std::size_t>(),
                                          je.at("pi_obs").get<double>(),
                                          je.at("count_ge").get<std::size_t>(),
                                          je.at("sims").get<std::size_t>(),
                                          je.at("p_value").get<double>(),
                                          je.at("significant").get<bool>()});
        } else {
          BhRecord bh;
          bh.parent = taxonomy.id_of(je.at("parent").get<std::string>());
          bh.partner = taxonomy.id_of(je.at("partner").get<std::string>());
          bh.depth = je.at("depth").get<std::size_t>();
          for (const auto& c : je.at("children")) bh.children.push_back(taxonomy.id_of(c.get<std::string>()));
          bh.child_p_values = je.at("child_p_values").get<std::vector<double>>();
          bh.L = je.at("L").get<std::size_t>();
          bh.min_children_pass = je.at("min_children_pass").get<std::size_t>();
          bh.passed = je.at("passed").get<bool>();
          v.trace.emplace_back(std::move(bh));
        }
      }
      out.push_back(std::move(v));
    }
    return out;
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string experiment_report_csv(const ExperimentResult& result, const Taxonomy& taxonomy) {
  std::ostringstream os;
  os << "pattern,miner,type1_rate,type2_rate,replicates\n";
  for (const auto& r : result.reports) {
    os << csv_quote(format_candidate(taxonomy, r.pattern)) << ',' << to_string(r.miner) << ','
       << format_double(r.type1_rate) << ',' << format_double(r.type2_rate) << ',' << r.replicates
       << '\n';
  }
  return os.str();
}

std::string experiment_report_json(const ExperimentResult& result, const Taxonomy& taxonomy,
                                   std::size_t replicates) {
  ordered_json doc;
  if (!result.reports.empty()) {
    doc["config"] = config_json(result.reports.front().config);
  }
  doc["replicates"] = replicates;
  ordered_json rows = ordered_json::array();
  for (const auto& r : result.reports) {
    rows.push_back({{"pattern", pair_json(taxonomy, r.pattern)},
                    {"miner", std::string(to_string(r.miner))},
                    {"type1_rate", r.type1_rate},
                    {"type2_rate", r.type2_rate},
                    {"type1_errors", r.type1_errors},
                    {"type2_errors", r.type2_errors},
                    {"replicates", r.replicates},
                    {"seed", r.seed}});
  }
  doc["reports"] = rows;
  return doc.dump(2) + "\n";
}

std::string replicate_verdicts_csv(const ExperimentResult& result, const Taxonomy& taxonomy) {
  std::ostringstream os;
  os << "replicate,dataset,pattern,miner,significant,p_value\n";
  for (const auto& v : result.verdicts) {
    os << v.replicate << ',' << (v.h0_true ? "h0" : "h1") << ','
       << csv_quote(format_candidate(taxonomy, v.pattern)) << ',' << to_string(v.miner) << ','
       << bool_str(v.significant) << ',' << format_double(v.p_value) << '\n';
  }
  return os.str();
}

}  // namespace sstc
