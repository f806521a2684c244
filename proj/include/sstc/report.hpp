#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sstc/experiments.hpp"
#include "sstc/miners.hpp"

namespace sstc {

/// Effective configuration of a `mine` run, echoed into the report header so the run
/// can be reproduced from the report alone.
struct MineRunInfo {
  std::string instances_path;
  std::string taxonomy_path;
  MinerKind miner = MinerKind::Sstcm;
  MinerConfig config;
  StudyArea area;
  bool area_from_data = true;
  std::vector<std::string> patterns;
  std::string format = "json";
  /// Pair-correlation diagnostic per observed leaf at distance config.d.
  double pcf_ring_width = 0.0;
  std::vector<std::pair<FeatureId, double>> pcf;
};

std::string mine_report_json(const MineRunInfo& info, const Taxonomy& taxonomy,
                             std::span<const PatternVerdict> verdicts);

/// `# key=value` header lines, then one `verdict` row per candidate followed by its
/// `test` / `bh` trace rows.
std::string mine_report_csv(const MineRunInfo& info, const Taxonomy& taxonomy,
                            std::span<const PatternVerdict> verdicts);

/// Inverse of mine_report_json for the verdict list. Throws ParseError.
std::vector<PatternVerdict> parse_mine_report(std::string_view json_text, const Taxonomy& taxonomy);

/// `pattern,miner,type1_rate,type2_rate,replicates`.
std::string experiment_report_csv(const ExperimentResult& result, const Taxonomy& taxonomy);
std::string experiment_report_json(const ExperimentResult& result, const Taxonomy& taxonomy,
                                   std::size_t replicates);
/// `replicate,dataset,pattern,miner,significant,p_value`.
std::string replicate_verdicts_csv(const ExperimentResult& result, const Taxonomy& taxonomy);

}  // namespace sstc
