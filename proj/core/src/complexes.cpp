#include "rgc/complexes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/Dense>

#include "json.hpp"

namespace rgc::complexes {

using geometry::kTolerance;
using geometry::squared_distance;

std::string_view to_string(ComplexKind kind) {
  return kind == ComplexKind::cech ? "cech" : "vietoris_rips";
}

ComplexKind complex_kind_from_string(std::string_view name) {
  if (name == "vr" || name == "vietoris_rips") return ComplexKind::vietoris_rips;
  if (name == "cech") return ComplexKind::cech;
  throw std::invalid_argument("unknown complex kind '" + std::string(name) + "'");
}

namespace {

void require_radius(double r, const char* op) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument(std::string(op) + ": r must be positive and finite");
}

// ---------------------------------------------------------------------------
// Maximum clique on a small dense subgraph, bitset branch and bound.

class LocalGraph {
 public:
  explicit LocalGraph(std::size_t m) : m_(m), words_((m + 63) / 64), bits_(m * words_, 0) {}

  std::size_t size() const { return m_; }
  std::size_t words() const { return words_; }
  void add_edge(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
    bits_[j * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool adjacent(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

 private:
  std::size_t m_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

class CliqueSearch {
 public:
  CliqueSearch(const LocalGraph& g, std::size_t floor) : g_(g), best_(floor) {}

  std::size_t run() {
    std::vector<std::uint64_t> all(g_.words(), 0);
    for (std::size_t i = 0; i < g_.size(); ++i) all[i / 64] |= std::uint64_t{1} << (i % 64);
    if (g_.size() > 0) expand(all, 0);
    return best_;
  }

 private:
  void expand(std::vector<std::uint64_t>& candidates, std::size_t depth) {
    const std::size_t words = g_.words();
    // Greedy sequential colouring; colour classes give the bound.
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> colour;
    std::vector<std::uint64_t> uncoloured = candidates;
    std::vector<std::uint64_t> klass(words);
    std::uint32_t k = 0;
    for (;;) {
      bool any = false;
      for (auto w : uncoloured)
        if (w) {
          any = true;
          break;
        }
      if (!any) break;
      ++k;
      klass = uncoloured;
      for (std::size_t w = 0; w < words; ++w) {
        while (klass[w]) {
          const auto bit = static_cast<std::size_t>(std::countr_zero(klass[w]));
          const std::size_t v = w * 64 + bit;
          klass[w] &= klass[w] - 1;
          uncoloured[w] &= ~(std::uint64_t{1} << bit);
          const std::uint64_t* nv = g_.row(v);
          for (std::size_t x = w; x < words; ++x) klass[x] &= ~nv[x];
          order.push_back(static_cast<std::uint32_t>(v));
          colour.push_back(k);
        }
      }
    }
    std::vector<std::uint64_t> next(words);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (depth + colour[i] <= best_) return;
      const std::size_t v = order[i];
      const std::uint64_t* nv = g_.row(v);
      bool empty = true;
      for (std::size_t w = 0; w < words; ++w) {
        next[w] = candidates[w] & nv[w];
        empty = empty && next[w] == 0;
      }
      if (empty) {
        best_ = std::max(best_, depth + 1);
      } else {
        std::vector<std::uint64_t> sub = next;
        expand(sub, depth + 1);
      }
      candidates[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
  }

  const LocalGraph& g_;
  std::size_t best_;
};

// Smallest-last (degeneracy) order of a local vertex set, highest core first.
template <class Adjacent>
std::vector<std::uint32_t> degeneracy_order(std::size_t m, Adjacent&& adjacent) {
  std::vector<std::uint32_t> degree(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (adjacent(i, j)) {
        ++degree[i];
        ++degree[j];
      }
  std::vector<char> removed(m, 0);
  std::vector<std::uint32_t> order(m);
  for (std::size_t pos = m; pos-- > 0;) {
    std::size_t pick = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!removed[i] && (pick == m || degree[i] < degree[pick])) pick = i;
    removed[pick] = 1;
    order[pos] = static_cast<std::uint32_t>(pick);
    for (std::size_t i = 0; i < m; ++i)
      if (!removed[i] && adjacent(i, pick)) --degree[i];
  }
  return order;
}

// Largest clique among `m` local vertices; returns `floor` when none is larger.
template <class Adjacent>
std::size_t local_max_clique(std::size_t m, Adjacent&& adjacent, std::size_t floor) {
  if (m <= floor) return floor;
  const auto order = degeneracy_order(m, adjacent);
  LocalGraph g(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (adjacent(order[a], order[b])) g.add_edge(a, b);
  return CliqueSearch(g, floor).run();
}

// ---------------------------------------------------------------------------
// Face enumeration shared by f_vector and face_participation.

class FaceWalker {
 public:
  FaceWalker(const PointSet& points, double r, ComplexKind kind, std::size_t max_size)
      : points_(points),
        kind_(kind),
        cover_(r / 2.0 + kTolerance),
        max_size_(max_size),
        graph_(geometry::build_adjacency(points, kind == ComplexKind::cech ? r + kTolerance : r)) {}

  template <class Visit>
  void run(Visit&& visit) {
    std::vector<std::size_t> face;
    for (std::size_t v = 0; v < points_.size(); ++v) {
      std::vector<std::uint32_t> cand;
      for (auto u : graph_.neighbors(v))
        if (u > v) cand.push_back(u);
      face.assign(1, v);
      walk(face, cand, visit);
    }
  }

 private:
  template <class Visit>
  void walk(std::vector<std::size_t>& face, const std::vector<std::uint32_t>& cand, Visit& visit) {
    visit(std::span<const std::size_t>(face));
    if (face.size() == max_size_) return;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const std::size_t c = cand[i];
      face.push_back(c);
      if (kind_ == ComplexKind::cech && face.size() >= 3 &&
          geometry::min_enclosing_ball(points_, face).radius > cover_) {
        face.pop_back();
        continue;
      }
      std::vector<std::uint32_t> next;
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        if (graph_.has_edge(c, cand[j])) next.push_back(cand[j]);
      walk(face, next, visit);
      face.pop_back();
    }
  }

  const PointSet& points_;
  ComplexKind kind_;
  double cover_;
  std::size_t max_size_;
  geometry::AdjacencyStructure graph_;
};


// Circumcentre of the support within its affine hull, accepted only when it
// lies in the convex hull (then the circumball is the support's minimum
// enclosing ball). Returns false for degenerate or off-hull supports.
bool hull_circumcentre(const PointSet& points, std::span<const std::size_t> support, double* centre) {
  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 9, 9>;
  using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 9, 1>;
  const int d = points.dim();
  const auto m = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::Map<const Eigen::VectorXd> p0(points.point(support[0]).data(), d);
  Small q(d, m);
  for (Eigen::Index i = 0; i < m; ++i)
    q.col(i) = Eigen::Map<const Eigen::VectorXd>(points.point(support[static_cast<std::size_t>(i) + 1]).data(), d) - p0;
  const Small gram = q.transpose() * q;
  Eigen::FullPivLU<Small> lu(gram);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return false;
  const SmallVec lambda = lu.solve(SmallVec(0.5 * gram.diagonal()));
  if (lambda.minCoeff() < -1e-12 || lambda.sum() > 1.0 + 1e-12) return false;
  Eigen::Map<Eigen::VectorXd>(centre, d) = p0 + q * lambda;
  return true;
}

}  // namespace

std::size_t max_clique_size(const geometry::AdjacencyStructure& graph) {
  const std::size_t n = graph.size();
  if (n == 0) return 0;
  // Global smallest-last order via bucket queue.
  std::vector<std::size_t> degree(n);
  std::size_t max_degree = 0;
  for (std::size_t v = 0; v < n; ++v) max_degree = std::max(max_degree, degree[v] = graph.degree(v));
  std::vector<std::vector<std::uint32_t>> buckets(max_degree + 1);
  for (std::size_t v = 0; v < n; ++v) buckets[degree[v]].push_back(static_cast<std::uint32_t>(v));
  std::vector<char> removed(n, 0);
  std::vector<std::size_t> position(n);
  std::size_t next_pos = 0, low = 0;
  while (next_pos < n) {
    while (buckets[low].empty()) ++low;
    const std::uint32_t v = buckets[low].back();
    buckets[low].pop_back();
    if (removed[v] || degree[v] != low) continue;
    removed[v] = 1;
    position[v] = next_pos++;
    for (auto u : graph.neighbors(v)) {
      if (removed[u]) continue;
      buckets[--degree[u]].push_back(u);
      low = std::min(low, degree[u]);
    }
  }
  // Forward neighbourhood: neighbours removed later.
  std::vector<std::size_t> forward_size(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (auto u : graph.neighbors(v))
      if (position[u] > position[v]) ++forward_size[v];
  std::vector<std::uint32_t> by_size(n);
  std::iota(by_size.begin(), by_size.end(), 0U);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](auto a, auto b) { return forward_size[a] > forward_size[b]; });
  std::size_t best = 1;
  for (auto v : by_size) {
    if (forward_size[v] + 1 <= best) break;
    std::vector<std::uint32_t> fwd;
    for (auto u : graph.neighbors(v))
      if (position[u] > position[v]) fwd.push_back(u);
    best = 1 + local_max_clique(
                   fwd.size(), [&](std::size_t a, std::size_t b) { return graph.has_edge(fwd[a], fwd[b]); },
                   best - 1);
  }
  return best;
}

int vr_dimension(const PointSet& points, double r) {
  require_radius(r, "vr_dimension");
  const std::size_t n = points.size();
  if (n == 0) return -1;
  const double reach = r + kTolerance;
  const double reach2 = reach * reach;
  if (points.dim() == 1) {
    // Interval graph: a clique is a run of sorted points whose extremes are adjacent.
    std::vector<double> x(points.coords().begin(), points.coords().end());
    std::sort(x.begin(), x.end());
    std::size_t best = 1, lo = 0;
    for (std::size_t hi = 0; hi < n; ++hi) {
      while ((x[hi] - x[lo]) * (x[hi] - x[lo]) > reach2) ++lo;
      best = std::max(best, hi - lo + 1);
    }
    return static_cast<int>(best) - 1;
  }
  geometry::SpatialGrid grid(points, reach);
  std::vector<std::uint32_t> rank(n);
  {
    auto order = grid.order();
    for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<std::uint32_t>(pos);
  }
  auto forward = [&](std::uint32_t v, auto&& f) {
    auto p = points.point(v);
    grid.for_each_near(p, [&](std::uint32_t u) {
      if (rank[u] > rank[v] && squared_distance(p, points.point(u)) <= reach2) f(u);
    });
  };
  std::vector<std::uint32_t> forward_size(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) forward(v, [&](std::uint32_t) { ++forward_size[v]; });
  std::vector<std::uint32_t> by_size(n);
  std::iota(by_size.begin(), by_size.end(), 0U);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](auto a, auto b) { return forward_size[a] > forward_size[b]; });
  std::size_t best = 1;
  std::vector<std::uint32_t> fwd;
  for (auto v : by_size) {
    if (forward_size[v] + 1 <= best) break;
    fwd.clear();
    forward(v, [&](std::uint32_t u) { fwd.push_back(u); });
    best = 1 + local_max_clique(
                   fwd.size(),
                   [&](std::size_t a, std::size_t b) {
                     return squared_distance(points.point(fwd[a]), points.point(fwd[b])) <= reach2;
                   },
                   best - 1);
  }
  return static_cast<int>(best) - 1;
}

int cech_dimension(const PointSet& points, double r) {
  require_radius(r, "cech_dimension");
  const std::size_t n = points.size();
  if (n == 0) return -1;
  const int d = points.dim();
  if (d >= 2 && n > kCechExactCap)
    throw std::length_error("cech_dimension: exact enumeration is capped at " +
                            std::to_string(kCechExactCap) +
                            " points for d >= 2; use grid_scan_bracket");
  const double cover = r / 2.0 + kTolerance;
  const double cover2 = cover * cover;
  const double pair_reach = 2.0 * cover;
  const double pair_reach2 = pair_reach * pair_reach;
  geometry::SpatialGrid grid(points, pair_reach);

  std::vector<std::vector<std::uint32_t>> near(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points.point(i);
    grid.for_each_near(p, [&](std::uint32_t j) {
      if (j != i && squared_distance(p, points.point(j)) <= pair_reach2) near[i].push_back(j);
    });
    std::sort(near[i].begin(), near[i].end());
  }
  auto coverage = [&](std::span<const double> centre) {
    std::size_t count = 0;
    grid.for_each_near(centre, [&](std::uint32_t j) {
      if (squared_distance(centre, points.point(j)) <= cover2) ++count;
    });
    return count;
  };

  std::vector<std::uint32_t> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0U);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](auto a, auto b) { return near[a].size() > near[b].size(); });

  // A ball holding the support can only cover the support itself plus
  // points within pair reach of every support point (`common`).
  const std::size_t max_support = static_cast<std::size_t>(d) + 1;
  std::vector<std::vector<std::uint32_t>> common(max_support + 1);
  std::size_t best = 1;
  std::vector<std::size_t> support;
  std::vector<double> centre(static_cast<std::size_t>(d));
  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    const auto& shared = common[depth];
    if (support.size() + shared.size() <= best) return;
    if (support.size() >= 2) {
      if (hull_circumcentre(points, support, centre.data()) &&
          squared_distance(centre, points.point(support[0])) <= cover2) {
        std::size_t count = 0;
        for (auto s : support) count += squared_distance(centre, points.point(s)) <= cover2;
        for (auto j : shared) count += squared_distance(centre, points.point(j)) <= cover2;
        best = std::max(best, count);
      }
    }
    if (support.size() == max_support) return;
    auto start = std::upper_bound(shared.begin(), shared.end(), static_cast<std::uint32_t>(support.back()));
    for (auto it = start; it != shared.end(); ++it) {
      const std::uint32_t j = *it;
      auto& next = common[depth + 1];
      next.clear();
      std::set_intersection(shared.begin(), shared.end(), near[j].begin(), near[j].end(), std::back_inserter(next));
      support.push_back(j);
      extend(depth + 1);
      support.pop_back();
    }
  };
  for (auto i : by_degree) {
    if (near[i].size() + 1 <= best) break;
    best = std::max(best, coverage(points.point(i)));
    support.assign(1, i);
    common[1] = near[i];
    extend(1);
  }
  return static_cast<int>(best) - 1;
}

int cech_dimension_1d(const PointSet& points, double r) {
  require_radius(r, "cech_dimension_1d");
  if (points.dim() != 1) throw std::invalid_argument("cech_dimension_1d: requires d = 1");
  if (points.empty()) return -1;
  std::vector<double> x(points.coords().begin(), points.coords().end());
  std::sort(x.begin(), x.end());
  const double width = r + 2.0 * kTolerance;
  std::size_t best = 1, lo = 0;
  for (std::size_t hi = 0; hi < x.size(); ++hi) {
    while (x[hi] - x[lo] > width) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return static_cast<int>(best) - 1;
}

int dimension(const PointSet& points, double r, ComplexKind kind) {
  if (kind == ComplexKind::vietoris_rips) return vr_dimension(points, r);
  return points.dim() == 1 ? cech_dimension_1d(points, r) : cech_dimension(points, r);
}

std::vector<std::uint64_t> f_vector(const PointSet& points, double r, ComplexKind kind, unsigned n_max) {
  require_radius(r, "f_vector");
  std::vector<std::uint64_t> f(static_cast<std::size_t>(n_max) + 1, 0);
  FaceWalker walker(points, r, kind, static_cast<std::size_t>(n_max) + 1);
  walker.run([&](std::span<const std::size_t> face) { ++f[face.size() - 1]; });
  return f;
}

Participation face_participation(const PointSet& points, double r, ComplexKind kind, unsigned n) {
  require_radius(r, "face_participation");
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  std::vector<char> in_face(points.size(), 0);
  std::unordered_set<std::uint64_t> pairs;
  FaceWalker walker(points, r, kind, size);
  walker.run([&](std::span<const std::size_t> face) {
    if (face.size() != size) return;
    for (std::size_t a = 0; a < face.size(); ++a) {
      in_face[face[a]] = 1;
      for (std::size_t b = a + 1; b < face.size(); ++b) {
        const auto lo = std::min(face[a], face[b]), hi = std::max(face[a], face[b]);
        pairs.insert((static_cast<std::uint64_t>(lo) << 32) | hi);
      }
    }
  });
  Participation out;
  out.points = static_cast<std::uint64_t>(std::count(in_face.begin(), in_face.end(), 1));
  out.pairs = pairs.size();
  return out;
}

ScanBracket grid_scan_bracket(const PointSet& points, double r, double h) {
  require_radius(r, "grid_scan_bracket");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid_scan_bracket: h must be positive");
  if (points.empty()) return {};
  const int d = points.dim();
  std::vector<double> lo(points.point(0).begin(), points.point(0).end());
  std::vector<double> hi = lo;
  for (std::size_t i = 1; i < points.size(); ++i) {
    auto p = points.point(i);
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  std::vector<long long> steps(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) steps[k] = static_cast<long long>(std::ceil((hi[k] - lo[k]) / h));
  const double inner = r / 2.0 + kTolerance;
  const double outer = r / 2.0 + h * std::sqrt(static_cast<double>(d)) / 2.0 + kTolerance;
  const double inner2 = inner * inner, outer2 = outer * outer;
  geometry::SpatialGrid grid(points, outer);

  ScanBracket out;
  std::vector<long long> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> centre(static_cast<std::size_t>(d));
  for (;;) {
    for (int k = 0; k < d; ++k) centre[k] = lo[k] + static_cast<double>(idx[k]) * h;
    std::uint64_t in = 0, near = 0;
    grid.for_each_near(centre, [&](std::uint32_t j) {
      const double s = squared_distance(centre, points.point(j));
      if (s <= outer2) ++near;
      if (s <= inner2) ++in;
    });
    out.lower = std::max(out.lower, in);
    out.upper = std::max(out.upper, near);
    int k = d - 1;
    while (k >= 0 && idx[k] == steps[k]) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return out;
}

ComplexSummary summarize(const PointSet& points, double r, ComplexKind kind, std::optional<unsigned> n_max) {
  ComplexSummary s;
  s.kind = kind;
  s.dimension = dimension(points, r, kind);
  if (n_max) {
    s.f_vector = f_vector(points, r, kind, *n_max);
    std::vector<Participation> part;
    for (unsigned n = 0; n <= *n_max; ++n) part.push_back(face_participation(points, r, kind, n));
    s.participation = std::move(part);
  }
  return s;
}

std::string to_json(const ComplexSummary& summary) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(summary.kind));
  j["dimension"] = summary.dimension;
  j["f_vector"] = summary.f_vector ? nlohmann::ordered_json(*summary.f_vector) : nlohmann::ordered_json(nullptr);
  if (summary.participation) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : *summary.participation) arr.push_back({p.points, p.pairs});
    j["participation"] = arr;
  } else {
    j["participation"] = nullptr;
  }
  return j.dump();
}

ComplexSummary summary_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ComplexSummary s;
  s.kind = complex_kind_from_string(j.at("kind").get<std::string>());
  s.dimension = j.at("dimension").get<int>();
  if (j.contains("f_vector") && !j["f_vector"].is_null())
    s.f_vector = j["f_vector"].get<std::vector<std::uint64_t>>();
  if (j.contains("participation") && !j["participation"].is_null()) {
    std::vector<Participation> part;
    for (const auto& e : j["participation"])
      part.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>()});
    s.participation = std::move(part);
  }
  return s;
}

}  // namespace rgc::complexes
