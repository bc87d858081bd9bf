#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rgc/pointprocess.hpp"

namespace rgc::geometry {

// Absolute slack for every closed-threshold predicate.
inline constexpr double kTolerance = 1e-12;

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

// Threshold graph ||x_i - x_j|| <= r in compressed sparse row form.
class AdjacencyStructure {
 public:
  AdjacencyStructure() = default;
  // Builds from an edge list; duplicates and self-loops are rejected.
  AdjacencyStructure(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(std::size_t u, std::size_t v) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
};

// Exact threshold graph; ties count as edges.
AdjacencyStructure build_adjacency(const PointSet& points, double r);

struct EnclosingBall {
  std::vector<double> center;
  double radius = 0.0;
  std::vector<std::size_t> support;  // indices into the input, at most d+1
};

// Minimum enclosing ball by move-to-front support-set recursion.
EnclosingBall min_enclosing_ball(const PointSet& points);
// Same, restricted to the listed points; support indices refer to `points`.
EnclosingBall min_enclosing_ball(const PointSet& points, std::span<const std::size_t> subset);

double diameter(const PointSet& points);

// Uniform bucket grid over the bounding box of a point set, with cells at
// least `reach` wide so that any two points within `reach` of each other sit
// in neighbouring cells. Cell side grows when the box would need more than
// about 4n cells.
class SpatialGrid {
 public:
  SpatialGrid(const PointSet& points, double reach);

  // Point indices ordered by (cell, first coordinate).
  std::span<const std::uint32_t> order() const { return order_; }

  // Calls f(index) for every point in the cells adjacent to `where`.
  template <class F>
  void for_each_near(std::span<const double> where, F&& f) const;

  double cell_side() const { return side_; }

 private:
  static constexpr int kMaxDim = 8;
  using CellIndex = std::array<long long, kMaxDim>;

  void cell_coords(std::span<const double> where, CellIndex& out) const;

  int dim_;
  double side_;
  std::vector<double> lo_;
  CellIndex extent_{};
  std::vector<std::size_t> cell_start_;
  std::vector<std::uint32_t> order_;
};

template <class F>
void SpatialGrid::for_each_near(std::span<const double> where, F&& f) const {
  if (order_.empty()) return;
  CellIndex base{};
  CellIndex cur{};
  cell_coords(where, base);
  for (int k = 0; k < dim_; ++k) cur[k] = -1;
  for (;;) {
    std::size_t id = 0;
    bool inside = true;
    for (int k = 0; k < dim_; ++k) {
      long long c = base[k] + cur[k];
      if (c < 0 || c >= extent_[k]) {
        inside = false;
        break;
      }
      id = id * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(c);
    }
    if (inside)
      for (std::size_t s = cell_start_[id]; s < cell_start_[id + 1]; ++s) f(order_[s]);
    int k = dim_ - 1;
    while (k >= 0 && cur[k] == 1) cur[k--] = -1;
    if (k < 0) break;
    ++cur[k];
  }
}

}  // namespace rgc::geometry
