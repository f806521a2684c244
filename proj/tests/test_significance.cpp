#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sstc/colocation.hpp"
#include "sstc/error.hpp"
#include "sstc/significance.hpp"

using namespace sstc;

namespace {

const Taxonomy& ab() {
  static const Taxonomy t = Taxonomy::parse(R"({"name":"r","children":[{"name":"A"},{"name":"B"}]})");
  return t;
}

// Ensemble of `sims` datasets, of which the first `close` put the A and B instances within
// reach of each other (pi = 1) and the rest keep them apart (pi = 0).
NullEnsemble forced_ensemble(std::size_t sims, std::size_t close) {
  const auto& t = ab();
  NullEnsemble ens;
  ens.study_area = StudyArea{0, 0, 100, 100};
  ens.per_feature_counts = {{t.id_of("A"), 1}, {t.id_of("B"), 1}};
  for (std::size_t i = 0; i < sims; ++i) {
    const double bx = i < close ? 1.0 : 90.0;
    ens.datasets.push_back(Dataset{{fixtures::inst(t, "A", 0, 0, 0), fixtures::inst(t, "B", 0, bx, 0)}});
  }
  return ens;
}

}  // namespace

TEST_CASE("Monte-Carlo p-value arithmetic is exact") {
  const auto& t = ab();
  const Dataset observed{{fixtures::inst(t, "A", 0, 0, 0), fixtures::inst(t, "B", 0, 1, 0)}};
  const std::vector<FeatureId> pattern{t.id_of("A"), t.id_of("B")};
  const std::vector<std::pair<std::size_t, double>> cases{{0, 0.01}, {4, 0.05}, {99, 1.0}};
  for (const auto& [count_ge, p] : cases) {
    const auto r = significance_test(observed, t, pattern, 2.0, 0.05, forced_ensemble(99, count_ge));
    CHECK(r.pi_obs == 1.0);
    CHECK(r.count_ge == count_ge);
    CHECK(r.p_value == p);
    CHECK(r.significant == (p <= 0.05));
  }
  CHECK(monte_carlo_p_value(0, 999) == 0.001);
}

TEST_CASE("empty ensemble is rejected") {
  const auto& t = ab();
  const Dataset observed{{fixtures::inst(t, "A", 0, 0, 0), fixtures::inst(t, "B", 0, 1, 0)}};
  const std::vector<FeatureId> pattern{t.id_of("A"), t.id_of("B")};
  try {
    significance_test(observed, t, pattern, 2.0, 0.05, NullEnsemble{});
    FAIL("expected EmptyEnsemble");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyEnsemble);
  }
  CHECK_THROWS_AS(assess_significance(pattern, 0.5, {}, 0.05), Error);
}

TEST_CASE("null ensemble matches counts, stays in the area and is seed-deterministic") {
  const auto t = Taxonomy::parse(fixtures::kLetterTaxonomy);
  Rng rng(4);
  const auto observed = oracle::random_dataset(rng, t.leaves(), 500, 200.0);
  const StudyArea area{0, 0, 200, 200};
  const auto ens = generate_null_ensemble(observed, area, 25, 17);
  REQUIRE(ens.size() == 25);
  for (const auto& ds : ens.datasets) {
    for (const auto leaf : t.leaves()) {
      const auto count = [&](const Dataset& d) {
        return std::count_if(d.instances.begin(), d.instances.end(),
                             [&](const auto& i) { return i.feature == leaf; });
      };
      CHECK(count(ds) == count(observed));
    }
    for (const auto& i : ds.instances) CHECK(area.contains(i.location));
  }
  const auto again = generate_null_ensemble(observed, area, 25, 17);
  CHECK(again.datasets == ens.datasets);
  CHECK(generate_null_ensemble(observed, area, 25, 18).datasets != ens.datasets);
  CHECK(generate_null_dataset(ens.per_feature_counts, area, 17, 7) == ens.datasets[7]);
}

TEST_CASE("pair correlation near one under CSR") {
  const auto& t = ab();
  const StudyArea area{0, 0, 1000, 1000};
  const Dataset seed_data{{fixtures::inst(t, "A", 0, 0, 0)}};
  const std::vector<std::pair<FeatureId, std::size_t>> counts{{t.id_of("A"), 400}};
  double sum = 0.0;
  const std::size_t R = 999;
  for (std::size_t i = 0; i < R; ++i) {
    const auto ds = generate_null_dataset(counts, area, 5, i);
    sum += pcf_estimate(ds.instances, area, 50.0, 25.0);
  }
  const double mean = sum / static_cast<double>(R);
  // No edge correction, so the mean sits slightly below 1.
  CHECK(mean > 0.9);
  CHECK(mean < 1.1);

  CHECK_THROWS_AS(pcf_estimate(seed_data.instances, area, 10.0, 5.0), Error);
  const auto two = generate_null_dataset(counts, area, 1, 0);
  CHECK_THROWS_AS(pcf_estimate(two.instances, area, 10.0, 0.0), Error);
  CHECK_THROWS_AS(pcf_estimate(two.instances, area, 10.0, 11.0), Error);
}

TEST_CASE("pair correlation sees clustering") {
  const auto& t = ab();
  const StudyArea area{0, 0, 1000, 1000};
  Dataset ds;
  Rng rng(8);
  // 40 tight clusters of 10 points.
  for (std::uint32_t c = 0; c < 40; ++c) {
    const double cx = uniform(rng, 50, 950), cy = uniform(rng, 50, 950);
    for (std::uint32_t k = 0; k < 10; ++k) {
      ds.instances.push_back(
          fixtures::inst(t, "A", c * 10 + k, cx + uniform(rng, -5, 5), cy + uniform(rng, -5, 5)));
    }
  }
  CHECK(pcf_estimate(ds.instances, area, 6.0, 3.0) > 5.0);
}

TEST_CASE("planted pattern is significant with the minimum attainable p") {
  const auto& t = ab();
  const StudyArea area{0, 0, 1000, 1000};
  Rng rng(13);
  Dataset observed;
  for (std::uint32_t i = 0; i < 60; ++i) {
    const double x = uniform(rng, 10, 990), y = uniform(rng, 10, 990);
    observed.instances.push_back(fixtures::inst(t, "A", i, x, y));
    observed.instances.push_back(fixtures::inst(t, "B", i, x + 2, y));
  }
  const auto ens = generate_null_ensemble(observed, area, 99, 1);
  const std::vector<FeatureId> pattern{t.id_of("A"), t.id_of("B")};
  const auto r = significance_test(observed, t, pattern, 5.0, 0.05, ens);
  CHECK(r.pi_obs == 1.0);
  CHECK(r.count_ge == 0);
  CHECK(r.p_value == 0.01);
  CHECK(r.significant);
}

TEST_CASE("parallel and serial null evaluation agree") {
  const auto t = Taxonomy::parse(fixtures::kLetterTaxonomy);
  Rng rng(31);
  const auto observed = oracle::random_dataset(rng, t.leaves(), 800, 500.0);
  const auto ens = generate_null_ensemble(observed, StudyArea{0, 0, 500, 500}, 49, 3);
  const SignificanceFrame frame(t, observed, ens, 20.0);
  for (const auto& [a, b] : {std::pair{"f_A", "f_G"}, std::pair{"f_E", "f_H"}, std::pair{"f_B", "f_H"}}) {
    const std::vector<FeatureId> pattern{t.id_of(a), t.id_of(b)};
    CHECK(null_participation_indices(frame, pattern) == null_participation_indices_serial(frame, pattern));
    CHECK(significance_test(frame, pattern, 0.05) == significance_test_serial(frame, pattern, 0.05));
  }
}

TEST_CASE("CSR calibration of the bare test") {
  const auto& t = ab();
  const StudyArea area{0, 0, 1000, 1000};
  const std::vector<std::pair<FeatureId, std::size_t>> counts{{t.id_of("A"), 80}, {t.id_of("B"), 80}};
  const std::vector<FeatureId> pattern{t.id_of("A"), t.id_of("B")};
  const std::size_t reps = 200;
  std::size_t rejections = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto observed = generate_null_dataset(counts, area, 1000 + r, 0);
    const auto ens = generate_null_ensemble(observed, area, 99, 5000 + r);
    if (significance_test(observed, t, pattern, 30.0, 0.05, ens).significant) ++rejections;
  }
  CHECK(static_cast<double>(rejections) / reps <= 0.081);
}
