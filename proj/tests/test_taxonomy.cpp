#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sstc/error.hpp"
#include "sstc/taxonomy.hpp"

using namespace sstc;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    Taxonomy::parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::InvalidArgument;
}

std::vector<std::string> names(const Taxonomy& t, const std::vector<FeatureId>& ids) {
  std::vector<std::string> out;
  for (const auto id : ids) out.push_back(t.name(id));
  return out;
}

}  // namespace

TEST_CASE("single node taxonomy is both root and leaf") {
  const auto t = Taxonomy::parse(R"({"name": "Retail"})");
  CHECK(t.size() == 1);
  CHECK(t.name(t.root()) == "Retail");
  CHECK(t.is_leaf(t.root()));
  CHECK(t.leaves() == std::vector<FeatureId>{t.root()});
  CHECK(t.height() == 1);
  CHECK(Taxonomy::parse(R"({"name": "Retail", "children": []})") == t);
}

TEST_CASE("retail taxonomy structure") {
  const auto t = Taxonomy::parse(fixtures::kRetailTaxonomy);
  CHECK(t.height() == 3);
  CHECK(names(t, t.leaf_descendants(t.root())) ==
        std::vector<std::string>{"Starbucks", "Caribou", "Dunn Bros", "Aldi", "Cub Foods"});
  CHECK(names(t, children(t, "Coffee Shop")) ==
        std::vector<std::string>{"Starbucks", "Caribou", "Dunn Bros"});
  CHECK(names(t, children(t, "Retail")) == std::vector<std::string>{"Coffee Shop", "Grocery"});
  CHECK(children(t, "Starbucks").empty());
  CHECK(t.parent(t.id_of("Aldi")) == t.id_of("Grocery"));
  CHECK_FALSE(t.parent(t.root()).has_value());
  CHECK(t.depth(t.id_of("Caribou")) == 2);
  CHECK(t.in_subtree(t.id_of("Coffee Shop"), t.id_of("Caribou")));
  CHECK_FALSE(t.in_subtree(t.id_of("Coffee Shop"), t.id_of("Aldi")));
}

TEST_CASE("taxonomy validation errors") {
  CHECK(parse_error("") == ErrorCode::EmptyDocument);
  CHECK(parse_error("   \n") == ErrorCode::EmptyDocument);
  CHECK(parse_error("[]") == ErrorCode::EmptyDocument);
  CHECK(parse_error("{}") == ErrorCode::EmptyDocument);
  CHECK(parse_error(R"([{"name":"a"},{"name":"b"}])") == ErrorCode::MultipleRoots);
  // Same node under two parents.
  CHECK(parse_error(R"({"name":"r","children":[{"name":"p","children":[{"name":"x"}]},
                                               {"name":"q","children":[{"name":"x"}]}]})") ==
        ErrorCode::DuplicateName);
  CHECK(parse_error(R"({"name":"r","children":[{"name":"p","children":[{"name":"r"}]}]})") ==
        ErrorCode::CycleDetected);
  CHECK(parse_error(R"({"name":"r","children":{"name":"x"}})") == ErrorCode::ParseError);
  CHECK(parse_error(R"({"children":[]})") == ErrorCode::ParseError);
  CHECK(parse_error("{not json") == ErrorCode::ParseError);

  const auto t = Taxonomy::parse(fixtures::kRetailTaxonomy);
  CHECK_THROWS_AS(children(t, "Peet's"), Error);
  CHECK_THROWS_AS(flatten(t, "Peet's", Dataset{}), Error);
}

TEST_CASE("serialize round trip") {
  for (const char* doc : {fixtures::kRetailTaxonomy, fixtures::kLetterTaxonomy, fixtures::kDeepTaxonomy}) {
    const auto t = Taxonomy::parse(doc);
    CHECK(Taxonomy::parse(t.serialize()) == t);
    CHECK(Taxonomy::parse(t.serialize(2)) == t);
  }
}

TEST_CASE("flatten: leaf identity and disjoint union") {
  const auto t = Taxonomy::parse(fixtures::kRetailTaxonomy);
  Dataset data;
  for (std::uint32_t i = 0; i < 5; ++i) data.instances.push_back(fixtures::inst(t, "Aldi", i, i, 0));
  for (std::uint32_t i = 0; i < 3; ++i) data.instances.push_back(fixtures::inst(t, "Starbucks", i, 0, i));
  for (std::uint32_t i = 0; i < 4; ++i) data.instances.push_back(fixtures::inst(t, "Caribou", i, i, i));

  const auto aldi = flatten(t, "Aldi", data);
  CHECK(aldi.instances.size() == 5);
  CHECK_FALSE(aldi.is_flattened);

  const auto coffee = flatten(t, "Coffee Shop", data);
  CHECK(coffee.is_flattened);
  CHECK(coffee.instances.size() == 7);
  CHECK(flatten(t, "Retail", data).instances.size() == 12);
}

TEST_CASE("flatten equals DFS over leaf descendants") {
  const auto t = Taxonomy::parse(fixtures::kDeepTaxonomy);
  Rng rng(3);
  const auto data = oracle::random_dataset(rng, t.leaves(), 400, 100.0);
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    const FeatureId f{v};
    CHECK(t.leaf_descendants(f) == oracle::dfs_leaves(t, f));
    auto expected = oracle::dfs_instances(t, f, data);
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      return instance_key(a) < instance_key(b);
    });
    const auto view = flatten(t, f, data);
    CHECK(view.instances == expected);
    std::size_t sum = 0;
    for (const auto leaf : t.leaf_descendants(f)) sum += flatten(t, leaf, data).instances.size();
    CHECK(view.instances.size() == sum);
  }
  CHECK(t.leaves() == oracle::dfs_leaves(t, t.root()));
}
