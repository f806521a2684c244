#pragma once

#include <string>
#include <vector>

#include "sstc/geometry.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc::fixtures {

// Retail example: brands under two categories.
inline const char* kRetailTaxonomy = R"({
  "name": "Retail",
  "children": [
    {"name": "Coffee Shop", "children": [{"name": "Starbucks"}, {"name": "Caribou"}, {"name": "Dunn Bros"}]},
    {"name": "Grocery", "children": [{"name": "Aldi"}, {"name": "Cub Foods"}]}
  ]
})";

// Eight-leaf tree with two internal parents:
//   root -> f_A, f_B {f_D, f_E, f_F}, f_C, f_G {f_H, f_I, f_J}
inline const char* kLetterTaxonomy = R"({
  "name": "root",
  "children": [
    {"name": "f_A"},
    {"name": "f_B", "children": [{"name": "f_D"}, {"name": "f_E"}, {"name": "f_F"}]},
    {"name": "f_C"},
    {"name": "f_G", "children": [{"name": "f_H"}, {"name": "f_I"}, {"name": "f_J"}]}
  ]
})";

// Three levels below the root: f_X -> {f_Y -> {l1, l2, l3}, l4, l5}, plus a partner leaf.
inline const char* kDeepTaxonomy = R"({
  "name": "root",
  "children": [
    {"name": "f_X", "children": [
      {"name": "f_Y", "children": [{"name": "l1"}, {"name": "l2"}, {"name": "l3"}]},
      {"name": "l4"},
      {"name": "l5"}
    ]},
    {"name": "partner"}
  ]
})";

inline FeatureInstance inst(const Taxonomy& t, const std::string& f, std::uint32_t id, double x,
                            double y) {
  return FeatureInstance{t.id_of(f), id, {x, y}};
}

}  // namespace sstc::fixtures
