#include "sstc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include <omp.h>

#include "sstc/error.hpp"

namespace sstc {

void StudyArea::validate() const {
  const bool finite = std::isfinite(min_x) && std::isfinite(min_y) && std::isfinite(max_x) &&
                      std::isfinite(max_y);
  if (!finite || !(max_x > min_x) || !(max_y > min_y)) {
    throw Error(ErrorCode::InvalidArgument, "study area must satisfy max > min on both axes");
  }
}

StudyArea bounding_area(const Dataset& data) {
  if (data.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot derive a study area from an empty dataset");
  }
  StudyArea area{data.instances[0].location.x, data.instances[0].location.y,
                 data.instances[0].location.x, data.instances[0].location.y};
  for (const auto& inst : data.instances) {
    area.min_x = std::min(area.min_x, inst.location.x);
    area.min_y = std::min(area.min_y, inst.location.y);
    area.max_x = std::max(area.max_x, inst.location.x);
    area.max_y = std::max(area.max_y, inst.location.y);
  }
  if (!(area.max_x > area.min_x) || !(area.max_y > area.min_y)) {
    throw Error(ErrorCode::InvalidArgument,
                "instances span a degenerate bounding box; supply the study area explicitly");
  }
  return area;
}

void validate_instances(std::span<const FeatureInstance> instances) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(instances.size());
  for (const auto& inst : instances) {
    if (!std::isfinite(inst.location.x) || !std::isfinite(inst.location.y)) {
      throw Error(ErrorCode::InvalidArgument, "instance with non-finite coordinates");
    }
    if (!seen.insert(instance_key(inst)).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate instance id " + std::to_string(inst.id) + " for feature " +
                      std::to_string(inst.feature.value));
    }
  }
}

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(std::span<const Point> points, double cell_size) : cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw Error(ErrorCode::InvalidArgument, "cell_size must be positive");
  }
  std::vector<std::pair<CellKey, std::uint32_t>> keyed;
  keyed.reserve(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    keyed.emplace_back(cell_of(points[i]), i);
  }
  std::sort(keyed.begin(), keyed.end());

  items_.reserve(keyed.size());
  for (const auto& [key, idx] : keyed) {
    if (keys_.empty() || keys_.back() != key) {
      if (!keys_.empty()) offsets_.push_back(static_cast<std::uint32_t>(items_.size()));
      keys_.push_back(key);
    }
    items_.push_back(idx);
  }
  if (!keys_.empty()) offsets_.push_back(static_cast<std::uint32_t>(items_.size()));
}

CellKey GridIndex::cell_of(Point p) const {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_size_))};
}

std::optional<std::size_t> GridIndex::cell_position(CellKey key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

std::span<const std::uint32_t> GridIndex::lookup(CellKey key) const {
  if (auto pos = cell_position(key)) return cell_items(*pos);
  return {};
}

GridIndex build_grid_index(std::span<const FeatureInstance> instances, double cell_size) {
  std::vector<Point> points;
  points.reserve(instances.size());
  for (const auto& inst : instances) points.push_back(inst.location);
  return GridIndex(points, cell_size);
}

// ---------------------------------------------------------------------------
// NeighborGraph

NeighborGraph::NeighborGraph(std::vector<FeatureInstance> nodes, std::vector<Edge> edges,
                             double threshold)
    : threshold_(threshold), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const std::size_t n = nodes_.size();
  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& [a, b] : edges_) {
    ++degree[a];
    ++degree[b];
  }
  offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  adjacency_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : edges_) {
    adjacency_[fill[a]++] = b;
    adjacency_[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }

  by_key_.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) by_key_.emplace(instance_key(nodes_[i]), i);
}

bool NeighborGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
  const auto adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<std::uint32_t> NeighborGraph::node_index(const FeatureInstance& inst) const {
  auto it = by_key_.find(instance_key(inst));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Half of the 3x3 stencil; every unordered cell pair is visited once.
constexpr std::int64_t kForward[4][2] = {{1, -1}, {1, 0}, {1, 1}, {0, 1}};

void join_cell(const GridIndex& grid, std::span<const FeatureInstance> instances, std::size_t cell,
               double d2, std::vector<NeighborGraph::Edge>& out) {
  const auto here = grid.cell_items(cell);
  for (std::size_t a = 0; a < here.size(); ++a) {
    for (std::size_t b = a + 1; b < here.size(); ++b) {
      const auto i = here[a];
      const auto j = here[b];
      if (squared_distance(instances[i].location, instances[j].location) <= d2) {
        out.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  const CellKey key = grid.cell_keys()[cell];
  for (const auto& off : kForward) {
    const auto there = grid.lookup({key.cx + off[0], key.cy + off[1]});
    for (const auto i : here) {
      for (const auto j : there) {
        if (squared_distance(instances[i].location, instances[j].location) <= d2) {
          out.emplace_back(std::min(i, j), std::max(i, j));
        }
      }
    }
  }
}

void check_threshold(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw Error(ErrorCode::InvalidArgument, "distance threshold must be positive");
  }
}

}  // namespace

NeighborGraph neighbor_pairs_serial(std::span<const FeatureInstance> instances, double d) {
  check_threshold(d);
  const GridIndex grid = build_grid_index(instances, d);
  const double d2 = d * d;
  std::vector<NeighborGraph::Edge> edges;
  for (std::size_t c = 0; c < grid.occupied_cells(); ++c) {
    join_cell(grid, instances, c, d2, edges);
  }
  return NeighborGraph({instances.begin(), instances.end()}, std::move(edges), d);
}

NeighborGraph neighbor_pairs(std::span<const FeatureInstance> instances, double d) {
  check_threshold(d);
  const GridIndex grid = build_grid_index(instances, d);
  const double d2 = d * d;
  const auto cells = static_cast<std::int64_t>(grid.occupied_cells());

  std::vector<std::vector<NeighborGraph::Edge>> per_thread(
      static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto& local = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t c = 0; c < cells; ++c) {
      join_cell(grid, instances, static_cast<std::size_t>(c), d2, local);
    }
  }

  std::size_t total = 0;
  for (const auto& v : per_thread) total += v.size();
  std::vector<NeighborGraph::Edge> edges;
  edges.reserve(total);
  for (auto& v : per_thread) edges.insert(edges.end(), v.begin(), v.end());
  // NeighborGraph sorts, so thread scheduling never leaks into the edge order.
  return NeighborGraph({instances.begin(), instances.end()}, std::move(edges), d);
}

}  // namespace sstc
