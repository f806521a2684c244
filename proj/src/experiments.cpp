#include "sstc/experiments.hpp"

#include <array>
#include <exception>

#include "sstc/error.hpp"

namespace sstc {

namespace {

constexpr std::uint64_t kStreamH0Data = 1;
constexpr std::uint64_t kStreamH1Data = 2;
constexpr std::uint64_t kStreamH0Null = 3;
constexpr std::uint64_t kStreamH1Null = 4;
constexpr std::array<MinerKind, 2> kMiners{MinerKind::Sstcm, MinerKind::FdrSstcm};

void run_one(const SynthSpec& spec, bool h0_true, std::size_t replicate,
             std::span<const FeaturePair> candidates, const MinerConfig& base,
             std::vector<ReplicateVerdict>& out) {
  const Seed data_seed = derive_seed(base.seed, replicate, h0_true ? kStreamH0Data : kStreamH1Data);
  MinerConfig config = base;
  config.seed = derive_seed(base.seed, replicate, h0_true ? kStreamH0Null : kStreamH1Null);

  const Dataset data = generate(spec, data_seed);
  MiningSession session(spec.taxonomy, data, spec.area, config);
  for (const auto& c : candidates) {
    for (const auto kind : kMiners) {
      const auto v = session.mine(kind, c);
      out.push_back(ReplicateVerdict{replicate, h0_true, c, kind, v.significant, v.p_value});
    }
  }
}

}  // namespace

ExperimentResult run_error_experiment(const SynthSpec& spec_h0, const SynthSpec& spec_h1,
                                      std::span<const FeaturePair> candidates,
                                      const MinerConfig& config, std::size_t replicates) {
  config.validate();
  if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be at least 1");
  spec_h0.validate();
  spec_h1.validate();
  if (!(spec_h0.taxonomy == spec_h1.taxonomy)) {
    throw Error(ErrorCode::InvalidSpecPair, "H0 and H1 specs use different taxonomies");
  }
  const auto& t = spec_h1.taxonomy;
  for (const auto& c : candidates) {
    if (c.first.value >= t.size() || c.second.value >= t.size()) {
      throw Error(ErrorCode::UnknownFeature, "candidate feature outside taxonomy");
    }
    if (!is_h0_true(spec_h0, c)) {
      throw Error(ErrorCode::InvalidSpecPair,
                  "candidate " + format_candidate(t, c) + " is planted in the H0 spec");
    }
    if (is_h0_true(spec_h1, c)) {
      throw Error(ErrorCode::InvalidSpecPair,
                  "candidate " + format_candidate(t, c) + " is labelled H0-true in the H1 spec");
    }
  }

  std::vector<std::vector<ReplicateVerdict>> per_replicate(replicates);
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(replicates);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < n; ++r) {
    try {
      auto& out = per_replicate[static_cast<std::size_t>(r)];
      run_one(spec_h0, true, static_cast<std::size_t>(r), candidates, config, out);
      run_one(spec_h1, false, static_cast<std::size_t>(r), candidates, config, out);
    } catch (...) {
#pragma omp critical(sstc_experiment_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& v : per_replicate) {
    result.verdicts.insert(result.verdicts.end(), v.begin(), v.end());
  }

  for (const auto& c : candidates) {
    for (const auto kind : kMiners) {
      ErrorRateReport rep;
      rep.pattern = c;
      rep.miner = kind;
      rep.replicates = replicates;
      rep.config = config;
      rep.seed = config.seed;
      for (const auto& v : result.verdicts) {
        if (v.pattern != c || v.miner != kind) continue;
        if (v.h0_true && v.significant) ++rep.type1_errors;
        if (!v.h0_true && !v.significant) ++rep.type2_errors;
      }
      rep.type1_rate = static_cast<double>(rep.type1_errors) / static_cast<double>(replicates);
      rep.type2_rate = static_cast<double>(rep.type2_errors) / static_cast<double>(replicates);
      result.reports.push_back(rep);
    }
  }
  return result;
}

}  // namespace sstc
