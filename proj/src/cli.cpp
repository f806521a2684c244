#include "sstc/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sstc/dataset_io.hpp"
#include "sstc/error.hpp"
#include "sstc/experiments.hpp"
#include "sstc/miners.hpp"
#include "sstc/report.hpp"
#include "sstc/significance.hpp"
#include "sstc/synthgen.hpp"

namespace sstc {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

// Thrown for flag/config problems so they map to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MineOptions {
  std::string instances;
  std::string taxonomy;
  std::string out = "-";
  std::string format = "json";
  std::string miner = "sstcm";
  std::string area;
  std::vector<std::string> patterns;
  MinerConfig config;
};

struct SynthOptions {
  std::string spec;
  std::string out;
  std::optional<Seed> seed;
};

struct ExperimentOptions {
  std::string h0_spec;
  std::string h1_spec;
  std::string out;
  std::vector<std::string> patterns;
  std::size_t replicates = 200;
  MinerConfig config;
};

void add_miner_flags(CLI::App* cmd, MinerConfig& c) {
  cmd->add_option("--distance", c.d, "Neighbor distance threshold in meters")->required();
  cmd->add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--q", c.q, "FDR level for the children screen")->capture_default_str();
  cmd->add_option("--sims", c.sims, "Monte-Carlo simulations per run")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master RNG seed")->capture_default_str();
  cmd->add_option("--min-children-pass", c.min_children_pass,
                  "Smallest BH rank L that lets a parent pass (fdr-sstcm)")
      ->capture_default_str();
  cmd->add_flag("--strict-bh", c.strict_bh, "Use p(j) < qj/m instead of <=");
}

void validate_config(const MinerConfig& c) {
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

StudyArea parse_area(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("--area expects min_x,min_y,max_x,max_y");
    }
  }
  if (v.size() != 4) throw ConfigError("--area expects min_x,min_y,max_x,max_y");
  StudyArea a{v[0], v[1], v[2], v[3]};
  try {
    a.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return a;
}

std::vector<FeaturePair> parse_patterns(const Taxonomy& t, const std::vector<std::string>& raw) {
  std::vector<FeaturePair> out;
  for (const auto& p : raw) {
    try {
      out.push_back(parse_candidate(t, p));
    } catch (const Error& e) {
      throw ConfigError(std::string("--pattern ") + e.what());
    }
  }
  return out;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
  } else {
    write_text_file(path, content);
  }
}

void warn_small_parents(const Taxonomy& t, std::span<const FeaturePair> candidates,
                        std::size_t min_children_pass, std::ostream& err) {
  std::vector<bool> warned(t.size(), false);
  for (const auto& [a, b] : candidates) {
    for (const auto top : {a, b}) {
      for (std::uint32_t v = top.value; v < t.subtree_end(top).value; ++v) {
        const FeatureId f{v};
        if (t.is_leaf(f) || warned[v]) continue;
        if (t.children(f).size() < min_children_pass) {
          err << "warning: \"" << t.name(f) << "\" has " << t.children(f).size()
              << " children, fewer than --min-children-pass " << min_children_pass
              << "; it can never pass the children screen\n";
          warned[v] = true;
        }
      }
    }
  }
}

int cmd_mine(const MineOptions& opt, std::ostream& out, std::ostream& err) {
  validate_config(opt.config);
  MinerKind kind;
  try {
    kind = parse_miner_kind(opt.miner);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (opt.format != "json" && opt.format != "csv") throw ConfigError("--format must be json or csv");
  std::optional<StudyArea> user_area;
  if (!opt.area.empty()) user_area = parse_area(opt.area);

  const Taxonomy taxonomy = read_taxonomy_file(opt.taxonomy);
  const auto candidates = parse_patterns(taxonomy, opt.patterns);
  const Dataset data = read_instances_csv(std::filesystem::path(opt.instances), taxonomy);
  if (data.empty()) throw Error(ErrorCode::ParseError, opt.instances + ": no instances");

  StudyArea area;
  if (user_area) {
    area = *user_area;
    for (const auto& inst : data.instances) {
      if (!area.contains(inst.location)) throw ConfigError("--area does not contain every instance");
    }
  } else {
    try {
      area = bounding_area(data);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }

  if (kind == MinerKind::FdrSstcm) {
    warn_small_parents(taxonomy, candidates, opt.config.min_children_pass, err);
  }

  MineRunInfo info;
  info.instances_path = opt.instances;
  info.taxonomy_path = opt.taxonomy;
  info.miner = kind;
  info.config = opt.config;
  info.area = area;
  info.area_from_data = !user_area;
  info.patterns = opt.patterns;
  info.format = opt.format;
  info.pcf_ring_width = opt.config.d / 2.0;
  for (const auto leaf : taxonomy.leaves()) {
    std::vector<FeatureInstance> pts;
    for (const auto& inst : data.instances) {
      if (inst.feature == leaf) pts.push_back(inst);
    }
    if (pts.size() >= 2) {
      info.pcf.emplace_back(leaf, pcf_estimate(pts, area, opt.config.d, info.pcf_ring_width));
    }
  }

  MiningSession session(taxonomy, data, area, opt.config);
  const auto verdicts = session.mine(kind, candidates);
  emit(opt.out,
       opt.format == "json" ? mine_report_json(info, taxonomy, verdicts)
                            : mine_report_csv(info, taxonomy, verdicts),
       out);
  return kExitOk;
}

SynthSpec load_spec(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_synth_spec(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

int cmd_synth(const SynthOptions& opt, std::ostream& out) {
  SynthSpec spec = load_spec(opt.spec);
  if (opt.seed) spec.seed = *opt.seed;
  const Dataset data = generate(spec);
  const std::filesystem::path dir(opt.out);
  std::ostringstream csv;
  write_instances_csv(csv, data, spec.taxonomy);
  write_text_file(dir / "instances.csv", csv.str());
  write_text_file(dir / "ground_truth.json", ground_truth_json(spec));
  write_text_file(dir / "taxonomy.json", spec.taxonomy.serialize(2) + "\n");
  out << "wrote " << data.size() << " instances to " << (dir / "instances.csv").string() << '\n';
  return kExitOk;
}

int cmd_experiment(const ExperimentOptions& opt, std::ostream& out) {
  validate_config(opt.config);
  if (opt.replicates < 1) throw ConfigError("--replicates must be at least 1");
  const SynthSpec h0 = load_spec(opt.h0_spec);
  const SynthSpec h1 = load_spec(opt.h1_spec);
  std::vector<FeaturePair> candidates =
      opt.patterns.empty() ? h1.candidates : parse_patterns(h1.taxonomy, opt.patterns);
  if (candidates.empty()) throw ConfigError("no candidate patterns (use --pattern)");

  ExperimentResult result;
  try {
    result = run_error_experiment(h0, h1, candidates, opt.config, opt.replicates);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSpecPair) throw ConfigError(e.what());
    throw;
  }
  const std::filesystem::path dir(opt.out);
  write_text_file(dir / "report.csv", experiment_report_csv(result, h1.taxonomy));
  write_text_file(dir / "report.json", experiment_report_json(result, h1.taxonomy, opt.replicates));
  write_text_file(dir / "raw_verdicts.csv", replicate_verdicts_csv(result, h1.taxonomy));
  out << experiment_report_csv(result, h1.taxonomy);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistically significant taxonomy-aware co-location mining"};
  app.require_subcommand(1);

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "Mine candidate patterns on an instance CSV");
  mine_cmd->add_option("--instances", mine.instances, "Instance CSV (feature,x,y)")->required();
  mine_cmd->add_option("--taxonomy", mine.taxonomy, "Taxonomy JSON")->required();
  mine_cmd->add_option("--miner", mine.miner, "sstcm | fdr-sstcm")->capture_default_str();
  mine_cmd->add_option("--pattern", mine.patterns, "Candidate \"FeatureA,FeatureB\" (repeatable)")
      ->required()
      ->delimiter('\0');
  mine_cmd->add_option("--out", mine.out, "Report path, - for stdout")->capture_default_str();
  mine_cmd->add_option("--format", mine.format, "json | csv")->capture_default_str();
  mine_cmd->add_option("--area", mine.area, "Study area min_x,min_y,max_x,max_y");
  add_miner_flags(mine_cmd, mine.config);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset from a spec");
  synth_cmd->add_option("--spec", synth.spec, "Synthetic spec JSON")->required();
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Override the seed in the synthetic spec file");

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Type-I / Type-II comparison of both miners");
  exp_cmd->add_option("--h0-spec", exp.h0_spec, "Spec with no planted candidates")->required();
  exp_cmd->add_option("--h1-spec", exp.h1_spec, "Spec planting every candidate")->required();
  exp_cmd->add_option("--out", exp.out, "Output directory")->required();
  exp_cmd->add_option("--pattern", exp.patterns, "Candidate (default: the H1 spec candidates)")
      ->delimiter('\0');
  exp_cmd->add_option("--replicates", exp.replicates, "Replicates")->capture_default_str();
  add_miner_flags(exp_cmd, exp.config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (mine_cmd->parsed()) return cmd_mine(mine, out, err);
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    return cmd_experiment(exp, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace sstc
