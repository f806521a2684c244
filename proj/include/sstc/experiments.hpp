#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sstc/miners.hpp"
#include "sstc/synthgen.hpp"

namespace sstc {

struct ErrorRateReport {
  FeaturePair pattern;
  MinerKind miner = MinerKind::Sstcm;
  double type1_rate = 0.0;
  double type2_rate = 0.0;
  std::size_t type1_errors = 0;  ///< rejections on H0-true replicates
  std::size_t type2_errors = 0;  ///< non-rejections on H0-false replicates
  std::size_t replicates = 0;
  MinerConfig config;
  Seed seed = 0;

  friend bool operator==(const ErrorRateReport&, const ErrorRateReport&) = default;
};

/// One miner verdict on one replicate dataset.
struct ReplicateVerdict {
  std::size_t replicate = 0;
  bool h0_true = true;  ///< true for the null-spec dataset
  FeaturePair pattern;
  MinerKind miner = MinerKind::Sstcm;
  bool significant = false;
  double p_value = 1.0;

  friend bool operator==(const ReplicateVerdict&, const ReplicateVerdict&) = default;
};

struct ExperimentResult {
  std::vector<ErrorRateReport> reports;  ///< pattern-major, then sstcm, fdr-sstcm
  std::vector<ReplicateVerdict> verdicts;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/// Replicate r draws its H0 and H1 datasets from seeds derived from (config.seed, r);
/// each dataset gets its own null ensemble, shared by both miners so that their
/// verdicts differ only through the post-order rule. Replicates run in parallel.
/// Throws InvalidSpecPair when the specs' taxonomies differ, a candidate is planted in
/// spec_h0, or a candidate is not planted in spec_h1.
ExperimentResult run_error_experiment(const SynthSpec& spec_h0, const SynthSpec& spec_h1,
                                      std::span<const FeaturePair> candidates,
                                      const MinerConfig& config, std::size_t replicates);

}  // namespace sstc
