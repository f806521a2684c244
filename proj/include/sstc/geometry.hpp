#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sstc {

/// Planar location in projected meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Axis-aligned study area. Invariant: max_x > min_x and max_y > min_y.
struct StudyArea {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 1.0;
  double max_y = 1.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double area() const { return width() * height(); }
  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }

  // Throws InvalidArgument unless the extent is non-degenerate and finite.
  void validate() const;

  friend bool operator==(const StudyArea&, const StudyArea&) = default;
};

/// Identifier of a taxonomy node. Dense index in taxonomy pre-order.
struct FeatureId {
  std::uint32_t value = 0;

  friend auto operator<=>(const FeatureId&, const FeatureId&) = default;
};

/// One located instance of a leaf feature type; `id` is unique within its feature.
struct FeatureInstance {
  FeatureId feature;
  std::uint32_t id = 0;
  Point location;

  friend bool operator==(const FeatureInstance&, const FeatureInstance&) = default;
};

inline std::uint64_t instance_key(const FeatureInstance& inst) {
  return (static_cast<std::uint64_t>(inst.feature.value) << 32) | inst.id;
}

struct Dataset {
  std::vector<FeatureInstance> instances;

  bool empty() const { return instances.empty(); }
  std::size_t size() const { return instances.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Tight bounding box of the dataset. Throws InvalidArgument when empty or degenerate.
StudyArea bounding_area(const Dataset& data);

/// Checks finiteness of coordinates and (feature, id) uniqueness.
void validate_instances(std::span<const FeatureInstance> instances);

struct CellKey {
  std::int64_t cx = 0;
  std::int64_t cy = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// Uniform grid over instance locations. Cells are stored in sorted key order with
/// a CSR layout; items are indices into the instance list the index was built from.
class GridIndex {
 public:
  GridIndex() = default;
  GridIndex(std::span<const Point> points, double cell_size);

  double cell_size() const { return cell_size_; }
  CellKey cell_of(Point p) const;

  std::size_t occupied_cells() const { return keys_.size(); }
  std::span<const CellKey> cell_keys() const { return keys_; }

  /// Items of the i-th occupied cell (in key order).
  std::span<const std::uint32_t> cell_items(std::size_t i) const {
    return {items_.data() + offsets_[i], items_.data() + offsets_[i + 1]};
  }

  /// Items of the cell with the given key; empty when unoccupied.
  std::span<const std::uint32_t> lookup(CellKey key) const;

  std::optional<std::size_t> cell_position(CellKey key) const;

 private:
  double cell_size_ = 1.0;
  std::vector<CellKey> keys_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> items_;
};

GridIndex build_grid_index(std::span<const FeatureInstance> instances, double cell_size);

/// Undirected neighbor graph under the relation dist(a,b) <= threshold.
/// Node i is instance i of the list the graph was built from.
class NeighborGraph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  NeighborGraph() = default;
  /// `edges` must hold i < j pairs; they are sorted and deduplicated here.
  NeighborGraph(std::vector<FeatureInstance> nodes, std::vector<Edge> edges, double threshold);

  double distance_threshold() const { return threshold_; }
  std::span<const FeatureInstance> nodes() const { return nodes_; }
  /// Sorted (i < j) edge list.
  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const std::uint32_t> neighbors(std::uint32_t node) const {
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
  }
  bool has_edge(std::uint32_t a, std::uint32_t b) const;
  std::optional<std::uint32_t> node_index(const FeatureInstance& inst) const;

 private:
  double threshold_ = 0.0;
  std::vector<FeatureInstance> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
  std::unordered_map<std::uint64_t, std::uint32_t> by_key_;
};

/// Grid-accelerated fixed-radius join (cell size = d), parallel over occupied cells.
NeighborGraph neighbor_pairs(std::span<const FeatureInstance> instances, double d);

/// Serial reference of neighbor_pairs; same candidate generation, single thread.
NeighborGraph neighbor_pairs_serial(std::span<const FeatureInstance> instances, double d);

}  // namespace sstc
