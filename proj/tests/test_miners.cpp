#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sstc/error.hpp"
#include "sstc/miners.hpp"
#include "sstc/synthgen.hpp"

using namespace sstc;

namespace {

const Taxonomy& letters() {
  static const Taxonomy t = Taxonomy::parse(fixtures::kLetterTaxonomy);
  return t;
}

// One instance each of f_H, f_D, f_E, f_F, all within 2 of f_H in the observed data.
// In null dataset i, child c sits next to f_H iff i < close[c], otherwise far away, so each
// child test has count_ge = close[c] exactly.
struct Constructed {
  Dataset observed;
  NullEnsemble ensemble;
};

Constructed constructed(std::size_t close_d, std::size_t close_e, std::size_t close_f,
                        std::size_t sims = 99) {
  const auto& t = letters();
  Constructed c;
  c.observed = Dataset{{fixtures::inst(t, "f_H", 0, 50, 50), fixtures::inst(t, "f_D", 0, 51, 50),
                        fixtures::inst(t, "f_E", 0, 50, 51), fixtures::inst(t, "f_F", 0, 49, 50)}};
  c.ensemble.study_area = StudyArea{0, 0, 100, 100};
  for (std::size_t i = 0; i < sims; ++i) {
    c.ensemble.datasets.push_back(Dataset{{
        fixtures::inst(t, "f_H", 0, 50, 50),
        fixtures::inst(t, "f_D", 0, i < close_d ? 51 : 90, 50),
        fixtures::inst(t, "f_E", 0, 50, i < close_e ? 51 : 10),
        fixtures::inst(t, "f_F", 0, i < close_f ? 49 : 10, 50),
    }});
  }
  return c;
}

MinerConfig cfg(double alpha = 0.05, double q = 0.05, std::size_t min_pass = 3) {
  MinerConfig c;
  c.d = 2.0;
  c.alpha = alpha;
  c.q = q;
  c.min_children_pass = min_pass;
  return c;
}

FeaturePair pair(const char* a, const char* b) { return {letters().id_of(a), letters().id_of(b)}; }

const TestRecord& test_at(const PatternVerdict& v, std::size_t i) {
  return std::get<TestRecord>(v.trace.at(i));
}

}  // namespace

TEST_CASE("bh_children_pass worked examples") {
  const std::vector<double> all_small{0.001, 0.002, 0.003};
  CHECK(bh_children_pass(all_small, 0.05, 3, false) == std::pair<std::size_t, bool>{3, true});
  const std::vector<double> one_small{0.001, 0.9, 0.95};
  CHECK(bh_children_pass(one_small, 0.05, 3, false) == std::pair<std::size_t, bool>{1, false});
  CHECK(bh_children_pass(one_small, 0.05, 1, false) == std::pair<std::size_t, bool>{1, true});
  // Two children can never reach the default of three.
  const std::vector<double> two{0.001, 0.001};
  CHECK(bh_children_pass(two, 0.05, 3, false).second == false);
}

TEST_CASE("SSTCM short-circuits at the first failing child") {
  const auto& t = letters();
  // f_E has count_ge = 7, p = 0.08; f_D and f_F have p = 0.01.
  auto c = constructed(0, 7, 0);
  MiningSession s(t, c.observed, c.ensemble, cfg(0.05, 0.10));
  const auto v = s.mine(MinerKind::Sstcm, pair("f_B", "f_H"));
  CHECK_FALSE(v.significant);
  CHECK(v.p_value == 1.0);
  REQUIRE(v.trace.size() == 2);
  CHECK(test_at(v, 0).pattern == pair("f_D", "f_H"));
  CHECK(test_at(v, 0).p_value == 0.01);
  CHECK(test_at(v, 0).depth == 1);
  CHECK(test_at(v, 1).pattern == pair("f_E", "f_H"));
  CHECK(test_at(v, 1).p_value == 0.08);
  CHECK_FALSE(test_at(v, 1).significant);
}

TEST_CASE("FDR-SSTCM screens the same children with BH and tests the parent") {
  const auto& t = letters();
  auto c = constructed(0, 7, 0);
  MiningSession s(t, c.observed, c.ensemble, cfg(0.05, 0.10));
  const auto v = s.mine(MinerKind::FdrSstcm, pair("f_B", "f_H"));
  REQUIRE(v.trace.size() == 5);
  CHECK(test_at(v, 0).pattern == pair("f_D", "f_H"));
  CHECK(test_at(v, 1).pattern == pair("f_E", "f_H"));
  CHECK(test_at(v, 2).pattern == pair("f_F", "f_H"));
  const auto& bh = std::get<BhRecord>(v.trace[3]);
  CHECK(bh.child_p_values == std::vector<double>{0.01, 0.08, 0.01});
  CHECK(bh.L == 3);
  CHECK(bh.passed);
  CHECK(bh.L == oracle::bh_definitional_L(bh.child_p_values, 0.10, false));
  CHECK(test_at(v, 4).pattern == pair("f_B", "f_H"));
  CHECK(test_at(v, 4).depth == 0);
  CHECK(v.significant);
  CHECK(v.p_value == 0.01);
  CHECK(test_count(v.trace) == 3 + 1);
}

TEST_CASE("FDR-SSTCM stops at the BH gate when L is below the minimum") {
  const auto& t = letters();
  // p = 0.01, 0.91, 0.96: L = 1.
  auto c = constructed(0, 90, 95);
  MiningSession s(t, c.observed, c.ensemble, cfg());
  const auto v = s.mine(MinerKind::FdrSstcm, pair("f_H", "f_B"));
  REQUIRE(v.trace.size() == 4);
  const auto& bh = std::get<BhRecord>(v.trace[3]);
  CHECK(bh.L == 1);
  CHECK_FALSE(bh.passed);
  CHECK_FALSE(v.significant);
  CHECK(v.p_value == 1.0);

  MiningSession relaxed(t, c.observed, c.ensemble, cfg(0.05, 0.05, 1));
  const auto r = relaxed.mine(MinerKind::FdrSstcm, pair("f_H", "f_B"));
  CHECK(std::get<BhRecord>(r.trace[3]).passed);
  CHECK(r.trace.size() == 5);
  CHECK(r.significant);
}

TEST_CASE("BH acceptance includes SSTCM acceptance when all children clear q/m") {
  const auto& t = letters();
  auto c = constructed(0, 0, 0);
  MiningSession s(t, c.observed, c.ensemble, cfg());
  const auto a = s.mine(MinerKind::Sstcm, pair("f_B", "f_H"));
  const auto b = s.mine(MinerKind::FdrSstcm, pair("f_B", "f_H"));
  CHECK(a.significant);
  CHECK(b.significant);
  CHECK(test_count(a.trace) == 4);
  CHECK(test_count(b.trace) == 4);
}

TEST_CASE("leaf-leaf candidates are a bare significance test for both miners") {
  const auto& t = letters();
  auto c = constructed(0, 7, 0);
  MiningSession s(t, c.observed, c.ensemble, cfg());
  const SignificanceFrame frame(t, c.observed, c.ensemble, 2.0);
  const std::vector<FeatureId> pattern{t.id_of("f_E"), t.id_of("f_H")};
  const auto bare = significance_test(frame, pattern, 0.05);
  for (const auto kind : {MinerKind::Sstcm, MinerKind::FdrSstcm}) {
    const auto v = s.mine(kind, pair("f_E", "f_H"));
    REQUIRE(v.trace.size() == 1);
    CHECK(v.significant == bare.significant);
    CHECK(v.p_value == bare.p_value);
    CHECK(v.pi_obs == bare.pi_obs);
  }
}

TEST_CASE("candidate validation") {
  const auto& t = letters();
  auto c = constructed(0, 0, 0);
  MiningSession s(t, c.observed, c.ensemble, cfg());
  CHECK_THROWS_AS(s.mine(MinerKind::Sstcm, pair("f_B", "f_D")), Error);
  CHECK_THROWS_AS(s.mine(MinerKind::Sstcm, pair("f_A", "f_A")), Error);
  CHECK_THROWS_AS(s.mine(MinerKind::Sstcm, FeaturePair{FeatureId{999}, t.id_of("f_A")}), Error);

  CHECK(parse_candidate(t, "f_A, f_G") == pair("f_A", "f_G"));
  CHECK(format_candidate(t, pair("f_A", "f_G")) == "f_A,f_G");
  auto code_of = [&](const char* text) {
    try {
      parse_candidate(t, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of("f_A") == ErrorCode::PatternTooSmall);
  CHECK(code_of("f_A,f_C,f_D") == ErrorCode::PatternTooLarge);
  CHECK(code_of("f_A,f_Z") == ErrorCode::UnknownFeature);

  MinerConfig bad = cfg();
  bad.d = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(parse_miner_kind("fdr-sstcm") == MinerKind::FdrSstcm);
  CHECK_THROWS_AS(parse_miner_kind("apriori"), Error);
}

TEST_CASE("three-level traversal records depth and covers every node") {
  const auto t = Taxonomy::parse(fixtures::kDeepTaxonomy);
  Rng rng(1);
  Dataset data;
  // Every leaf under f_X has instances right next to partner instances.
  std::uint32_t pid = 0;
  for (const auto* leaf : {"l1", "l2", "l3", "l4", "l5"}) {
    for (std::uint32_t i = 0; i < 20; ++i) {
      const double x = uniform(rng, 10, 490), y = uniform(rng, 10, 490);
      data.instances.push_back(fixtures::inst(t, leaf, i, x, y));
      data.instances.push_back(fixtures::inst(t, "partner", pid++, x + 1, y));
    }
  }
  MinerConfig c;
  c.d = 3.0;
  c.seed = 4;
  MiningSession s(t, data, StudyArea{0, 0, 500, 500}, c);
  for (const auto kind : {MinerKind::Sstcm, MinerKind::FdrSstcm}) {
    const auto v = s.mine(kind, {t.id_of("f_X"), t.id_of("partner")});
    CHECK(v.significant);
    std::vector<std::pair<std::string, std::size_t>> seen;
    for (const auto& e : v.trace) {
      if (const auto* r = std::get_if<TestRecord>(&e)) seen.emplace_back(t.name(r->pattern.first), r->depth);
    }
    const std::vector<std::pair<std::string, std::size_t>> expected{
        {"l1", 2}, {"l2", 2}, {"l3", 2}, {"f_Y", 1}, {"l4", 1}, {"l5", 1}, {"f_X", 0}};
    CHECK(seen == expected);
  }
}

TEST_CASE("parent-parent candidates traverse both sides before the final test") {
  const auto& t = letters();
  Rng rng(6);
  Dataset data;
  std::uint32_t n = 0;
  for (const auto* b : {"f_D", "f_E", "f_F"}) {
    for (const auto* g : {"f_H", "f_I", "f_J"}) {
      for (int i = 0; i < 10; ++i) {
        const double x = uniform(rng, 10, 990), y = uniform(rng, 10, 990);
        data.instances.push_back(fixtures::inst(t, b, n, x, y));
        data.instances.push_back(fixtures::inst(t, g, n, x + 1, y));
        ++n;
      }
    }
  }
  MinerConfig c;
  c.d = 3.0;
  MiningSession s(t, data, StudyArea{0, 0, 1000, 1000}, c);
  const auto v = s.mine(MinerKind::Sstcm, pair("f_B", "f_G"));
  CHECK(v.significant);
  // Three children each side plus the flattened test per side, then the final test.
  CHECK(test_count(v.trace) == 3 + 1 + 3 + 1 + 1);
  CHECK(test_at(v, 3).pattern == pair("f_B", "f_G"));
  CHECK(test_at(v, 7).pattern == pair("f_G", "f_B"));
  CHECK(test_at(v, 8).pattern == pair("f_B", "f_G"));
}

TEST_CASE("flat taxonomy: miners agree with the bare test") {
  const auto t = Taxonomy::parse(
      R"({"name":"r","children":[{"name":"a"},{"name":"b"},{"name":"c"},{"name":"d"}]})");
  Rng rng(77);
  const auto data = oracle::random_dataset(rng, t.leaves(), 300, 300.0);
  MinerConfig c;
  c.d = 15.0;
  c.seed = 9;
  const StudyArea area{0, 0, 300, 300};
  std::vector<FeaturePair> cands;
  for (const auto a : t.leaves()) {
    for (const auto b : t.leaves()) {
      if (a < b) cands.emplace_back(a, b);
    }
  }
  const auto v1 = sstcm(data, t, cands, c, area);
  const auto v2 = fdr_sstcm(data, t, cands, c, area);
  const auto ens = generate_null_ensemble(data, area, c.sims, c.seed);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const std::vector<FeatureId> pattern{cands[i].first, cands[i].second};
    const auto bare = significance_test(data, t, pattern, c.d, c.alpha, ens);
    CHECK(v1[i].significant == bare.significant);
    CHECK(v2[i].significant == bare.significant);
    CHECK(v1[i].p_value == bare.p_value);
    CHECK(v2[i].p_value == bare.p_value);
  }
}

TEST_CASE("mining is deterministic for a fixed seed") {
  const auto& t = letters();
  Rng rng(3);
  const auto data = oracle::random_dataset(rng, t.leaves(), 600, 400.0);
  MinerConfig c;
  c.d = 12.0;
  c.seed = 42;
  c.min_children_pass = 2;
  const StudyArea area{0, 0, 400, 400};
  const std::vector<FeaturePair> cands{pair("f_A", "f_G"), pair("f_E", "f_H"), pair("f_B", "f_H"),
                                       pair("f_B", "f_G")};
  CHECK(sstcm(data, t, cands, c, area) == sstcm(data, t, cands, c, area));
  CHECK(fdr_sstcm(data, t, cands, c, area) == fdr_sstcm(data, t, cands, c, area));
}
