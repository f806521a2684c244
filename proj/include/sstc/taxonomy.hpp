#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sstc/geometry.hpp"

namespace sstc {

/// Rooted is_a tree over feature types.
///
/// Node ids are assigned in document pre-order, so the subtree of node f occupies the
/// contiguous id range [f, subtree_end(f)). Children keep document order. Internal
/// nodes own no instances; every instance attaches to a leaf.
class Taxonomy {
 public:
  /// Parses the recursive `{"name": ..., "children": [...]}` JSON form.
  /// Throws EmptyDocument, DuplicateName, CycleDetected, MultipleRoots or ParseError.
  static Taxonomy parse(std::string_view json_text);

  /// Compact JSON; parse(serialize()) reproduces the tree.
  std::string serialize(int indent = -1) const;

  std::size_t size() const { return nodes_.size(); }
  FeatureId root() const { return FeatureId{0}; }

  std::optional<FeatureId> find(std::string_view name) const;
  /// Throws UnknownFeature.
  FeatureId id_of(std::string_view name) const;
  const std::string& name(FeatureId f) const { return node(f).name; }

  std::optional<FeatureId> parent(FeatureId f) const;
  std::span<const FeatureId> children(FeatureId f) const { return node(f).children; }
  bool is_leaf(FeatureId f) const { return node(f).children.empty(); }
  std::size_t depth(FeatureId f) const { return node(f).depth; }
  /// Number of levels, a single-node tree has height 1.
  std::size_t height() const;

  FeatureId subtree_end(FeatureId f) const { return FeatureId{node(f).subtree_end}; }
  /// True when `descendant` lies in the subtree rooted at `ancestor` (inclusive).
  bool in_subtree(FeatureId ancestor, FeatureId descendant) const {
    return descendant.value >= ancestor.value && descendant.value < node(ancestor).subtree_end;
  }

  /// Leaves under f in document order; {f} for a leaf.
  std::vector<FeatureId> leaf_descendants(FeatureId f) const;
  std::vector<FeatureId> leaves() const { return leaf_descendants(root()); }

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) { return a.nodes_ == b.nodes_; }

 private:
  struct Node {
    std::string name;
    std::optional<FeatureId> parent;
    std::vector<FeatureId> children;
    std::size_t depth = 0;
    std::uint32_t subtree_end = 0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  const Node& node(FeatureId f) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, FeatureId> by_name_;
};

/// Direct children of f in document order. Throws UnknownFeature.
std::vector<FeatureId> children(const Taxonomy& t, FeatureId f);
std::vector<FeatureId> children(const Taxonomy& t, std::string_view f);

/// A feature with its materialized instance set. For an internal node the set is the
/// union over its descendant leaves, ordered by (leaf id, instance id).
struct FeatureView {
  FeatureId feature;
  std::vector<FeatureInstance> instances;
  bool is_flattened = false;
};

/// Throws UnknownFeature.
FeatureView flatten(const Taxonomy& t, FeatureId f, const Dataset& data);
FeatureView flatten(const Taxonomy& t, std::string_view f, const Dataset& data);

}  // namespace sstc
