#include "rgc/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rgc::geometry {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

AdjacencyStructure::AdjacencyStructure(
    std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("AdjacencyStructure: vertex out of range");
    if (u == v) throw std::invalid_argument("AdjacencyStructure: self-loop");
    ++degree[u];
    ++degree[v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges) {
    neighbors_[fill[u]++] = v;
    neighbors_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw std::invalid_argument("AdjacencyStructure: duplicate edge");
  }
}

bool AdjacencyStructure::has_edge(std::size_t u, std::size_t v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

SpatialGrid::SpatialGrid(const PointSet& points, double reach) : dim_(points.dim()) {
  if (dim_ > kMaxDim) throw std::invalid_argument("SpatialGrid: dimension above 8 unsupported");
  const std::size_t n = points.size();
  lo_.assign(static_cast<std::size_t>(dim_), 0.0);
  std::vector<double> hi(static_cast<std::size_t>(dim_), 0.0);
  if (n > 0) {
    for (int k = 0; k < dim_; ++k) lo_[k] = hi[k] = points.point(0)[k];
    for (std::size_t i = 1; i < n; ++i) {
      auto p = points.point(i);
      for (int k = 0; k < dim_; ++k) {
        lo_[k] = std::min(lo_[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
  }
  double widest = 0.0;
  for (int k = 0; k < dim_; ++k) widest = std::max(widest, hi[k] - lo_[k]);
  side_ = reach > 0.0 ? reach : std::max(widest, 1.0);
  const double cell_budget = 4.0 * static_cast<double>(n) + 64.0;
  for (;;) {
    double cells = 1.0;
    for (int k = 0; k < dim_; ++k) cells *= std::floor((hi[k] - lo_[k]) / side_) + 1.0;
    if (cells <= cell_budget) break;
    side_ *= 2.0;
  }
  std::size_t total = 1;
  for (int k = 0; k < dim_; ++k) {
    extent_[k] = static_cast<long long>(std::floor((hi[k] - lo_[k]) / side_)) + 1;
    total *= static_cast<std::size_t>(extent_[k]);
  }

  std::vector<std::size_t> cell_of(n);
  CellIndex c{};
  for (std::size_t i = 0; i < n; ++i) {
    cell_coords(points.point(i), c);
    std::size_t id = 0;
    for (int k = 0; k < dim_; ++k) id = id * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(c[k]);
    cell_of[i] = id;
  }
  cell_start_.assign(total + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++cell_start_[cell_of[i] + 1];
  for (std::size_t id = 0; id < total; ++id) cell_start_[id + 1] += cell_start_[id];
  order_.resize(n);
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  for (std::size_t id = 0; id < total; ++id) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(cell_start_[id]);
    auto last = order_.begin() + static_cast<std::ptrdiff_t>(cell_start_[id + 1]);
    if (last - first > 1)
      std::sort(first, last, [&](std::uint32_t a, std::uint32_t b) {
        const double xa = points.point(a)[0], xb = points.point(b)[0];
        return xa < xb || (xa == xb && a < b);
      });
  }
}

void SpatialGrid::cell_coords(std::span<const double> where, CellIndex& out) const {
  for (int k = 0; k < dim_; ++k) {
    double c = std::floor((where[k] - lo_[k]) / side_);
    c = std::clamp(c, -2.0, static_cast<double>(extent_[k]) + 1.0);
    out[k] = static_cast<long long>(c);
  }
}

AdjacencyStructure build_adjacency(const PointSet& points, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("build_adjacency: r must be positive");
  const double reach = r + kTolerance;
  const double reach2 = reach * reach;
  SpatialGrid grid(points, reach);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points.point(i);
    grid.for_each_near(p, [&](std::uint32_t j) {
      if (j > i && squared_distance(p, points.point(j)) <= reach2)
        edges.emplace_back(static_cast<std::uint32_t>(i), j);
    });
  }
  return AdjacencyStructure(points.size(), edges);
}

double diameter(const PointSet& points) {
  if (points.empty()) throw std::invalid_argument("diameter: empty point list");
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, squared_distance(points.point(i), points.point(j)));
  return std::sqrt(best);
}

namespace {

struct Ball {
  Eigen::VectorXd center;
  double radius = -1.0;  // negative: empty ball
};

// Smallest ball with all support points on its boundary: the circumcentre in
// the affine hull of the support. A rank-deficient system is solved in the
// least-squares sense and the radius taken as the largest support distance.
Ball circumball(const PointSet& points, const std::vector<std::size_t>& support) {
  const int d = points.dim();
  Ball ball;
  if (support.empty()) {
    ball.center = Eigen::VectorXd::Zero(d);
    return ball;
  }
  Eigen::Map<const Eigen::VectorXd> p0(points.point(support[0]).data(), d);
  if (support.size() == 1) {
    ball.center = p0;
    ball.radius = 0.0;
    return ball;
  }
  const auto m = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::MatrixXd q(d, m);
  for (Eigen::Index i = 0; i < m; ++i)
    q.col(i) = Eigen::Map<const Eigen::VectorXd>(points.point(support[static_cast<std::size_t>(i) + 1]).data(), d) - p0;
  const Eigen::MatrixXd gram = q.transpose() * q;
  const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  ball.center = p0 + q * lambda;
  double r2 = 0.0;
  for (std::size_t s : support) {
    Eigen::Map<const Eigen::VectorXd> p(points.point(s).data(), d);
    r2 = std::max(r2, (p - ball.center).squaredNorm());
  }
  ball.radius = std::sqrt(r2);
  return ball;
}

bool contains(const Ball& ball, std::span<const double> p) {
  if (ball.radius < 0.0) return false;
  Eigen::Map<const Eigen::VectorXd> v(p.data(), static_cast<Eigen::Index>(p.size()));
  return (v - ball.center).norm() <= ball.radius + kTolerance;
}

class MoveToFront {
 public:
  MoveToFront(const PointSet& points, std::vector<std::size_t> list)
      : points_(points), list_(std::move(list)) {}

  EnclosingBall solve() {
    support_.clear();
    recurse(list_.size());
    EnclosingBall out;
    out.center.assign(best_.center.data(), best_.center.data() + best_.center.size());
    out.radius = std::max(best_.radius, 0.0);
    out.support = best_support_;
    return out;
  }

 private:
  void recurse(std::size_t end) {
    best_ = circumball(points_, support_);
    best_support_ = support_;
    if (support_.size() == static_cast<std::size_t>(points_.dim()) + 1) return;
    for (std::size_t i = 0; i < end; ++i) {
      const std::size_t p = list_[i];
      if (contains(best_, points_.point(p))) continue;
      support_.push_back(p);
      recurse(i);
      support_.pop_back();
      std::rotate(list_.begin(), list_.begin() + static_cast<std::ptrdiff_t>(i),
                  list_.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
  }

  const PointSet& points_;
  std::vector<std::size_t> list_;
  std::vector<std::size_t> support_;
  Ball best_;
  std::vector<std::size_t> best_support_;
};

}  // namespace

EnclosingBall min_enclosing_ball(const PointSet& points, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("min_enclosing_ball: empty point list");
  for (std::size_t i : subset)
    if (i >= points.size()) throw std::out_of_range("min_enclosing_ball: index out of range");
  MoveToFront solver(points, std::vector<std::size_t>(subset.begin(), subset.end()));
  return solver.solve();
}

EnclosingBall min_enclosing_ball(const PointSet& points) {
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return min_enclosing_ball(points, all);
}

}  // namespace rgc::geometry
