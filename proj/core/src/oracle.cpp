#include "rgc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace rgc::oracle {

std::size_t brute_max_clique(const geometry::AdjacencyStructure& graph) {
  const std::size_t n = graph.size();
  if (n > kMaxCliqueVertices) throw std::length_error("brute_max_clique: more than 25 vertices");
  if (n == 0) return 0;
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (u != v && graph.has_edge(v, u)) adj[v] |= 1u << u;
  // is_clique[mask]: drop the lowest vertex, which must see all the others.
  const std::uint32_t full = 1u << n;
  std::vector<char> is_clique(full, 0);
  is_clique[0] = 1;
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int low = __builtin_ctz(mask);
    const std::uint32_t rest = mask & (mask - 1);
    if (is_clique[rest] && (adj[static_cast<std::size_t>(low)] & rest) == rest) {
      is_clique[mask] = 1;
      best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
    }
  }
  return best;
}

namespace {

// Solves a small dense system by Gaussian elimination with partial pivoting;
// false when (numerically) singular.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row)
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    if (std::abs(a[piv][col]) < 1e-14) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = col + 1; row < m; ++row) {
      const double f = a[row][col] / a[col][col];
      for (std::size_t c = col; c < m; ++c) a[row][c] -= f * a[col][c];
      b[row] -= f * b[col];
    }
  }
  x.assign(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < m; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return true;
}

double sq_dist(const PointSet& pts, std::size_t i, const std::vector<double>& c) {
  double s = 0.0;
  auto p = pts.point(i);
  for (std::size_t k = 0; k < c.size(); ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
  return s;
}

// Circumcentre of the support within its affine hull.
bool circumcentre(const PointSet& pts, const std::vector<std::size_t>& support, std::vector<double>& centre) {
  const auto d = static_cast<std::size_t>(pts.dim());
  auto p0 = pts.point(support[0]);
  centre.assign(p0.begin(), p0.end());
  const std::size_t m = support.size() - 1;
  if (m == 0) return true;
  std::vector<std::vector<double>> q(m, std::vector<double>(d));
  for (std::size_t i = 0; i < m; ++i) {
    auto p = pts.point(support[i + 1]);
    for (std::size_t k = 0; k < d; ++k) q[i][k] = p[k] - p0[k];
  }
  std::vector<std::vector<double>> gram(m, std::vector<double>(m));
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += q[i][k] * q[j][k];
      gram[i][j] = s;
    }
    rhs[i] = 0.5 * gram[i][i];
  }
  std::vector<double> lambda;
  if (!solve_linear(gram, rhs, lambda)) return false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < d; ++k) centre[k] += lambda[i] * q[i][k];
  return true;
}

}  // namespace

double brute_enclosing_radius(const PointSet& points, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("brute_enclosing_radius: empty subset");
  const std::size_t max_support = std::min(subset.size(), static_cast<std::size_t>(points.dim()) + 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> support;
  std::vector<double> centre;
  // Every combination of 1..d+1 subset members as the support set.
  auto visit = [&](auto&& self, std::size_t from) -> void {
    if (!support.empty() && circumcentre(points, support, centre)) {
      double r2 = 0.0;
      for (std::size_t s : support) r2 = std::max(r2, sq_dist(points, s, centre));
      const double radius = std::sqrt(r2);
      if (radius < best) {
        bool covers = true;
        for (std::size_t i : subset)
          if (std::sqrt(sq_dist(points, i, centre)) > radius + 1e-10) {
            covers = false;
            break;
          }
        if (covers) best = radius;
      }
    }
    if (support.size() == max_support) return;
    for (std::size_t i = from; i < subset.size(); ++i) {
      support.push_back(subset[i]);
      self(self, i + 1);
      support.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

std::size_t brute_cech_count(const PointSet& points, double r) {
  if (points.size() > kMaxCechPoints) throw std::length_error("brute_cech_count: more than 20 points");
  if (!(r > 0.0)) throw std::invalid_argument("brute_cech_count: r must be positive");
  const double limit = 0.5 * r + geometry::kTolerance;
  std::size_t best = 0;
  std::vector<std::size_t> face;
  // Faces are closed under taking subsets, so grow them one index at a time.
  auto grow = [&](auto&& self, std::size_t from) -> void {
    best = std::max(best, face.size());
    for (std::size_t i = from; i < points.size(); ++i) {
      face.push_back(i);
      if (brute_enclosing_radius(points, face) <= limit) self(self, i + 1);
      face.pop_back();
    }
  };
  grow(grow, 0);
  return best;
}

analytics::ExactRatio enumerate_ballot(unsigned n, unsigned m, unsigned k) {
  const unsigned steps = n + m;
  if (steps > kMaxBallotSteps) throw std::length_error("enumerate_ballot: n + m above 14");
  std::uint64_t total = 0;
  std::uint64_t reaching = 0;
  for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
    if (static_cast<unsigned>(__builtin_popcount(mask)) != m) continue;  // set bit = up step
    ++total;
    long long level = n;
    bool reached = level >= static_cast<long long>(k);
    for (unsigned s = 0; s < steps && !reached; ++s) {
      level += (mask >> s) & 1u ? 1 : -1;
      reached = level >= static_cast<long long>(k);
    }
    reaching += reached;
  }
  return analytics::ExactRatio::make(reaching, total);
}

namespace {

constexpr std::array<double, 8> kGlNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

// Integral over the remaining coordinates in [-1,1] of 1(range of all
// points <= 1), given the points fixed so far (the origin included).
double range_integral(std::vector<double>& fixed, unsigned remaining) {
  const auto [lo_it, hi_it] = std::minmax_element(fixed.begin(), fixed.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi - lo > 1.0) return 0.0;
  if (remaining == 0) return 1.0;
  if (remaining == 1) return 2.0 - (hi - lo);
  // The integrand is polynomial between these breakpoints.
  std::vector<double> cuts{-1.0, 1.0};
  for (double p : fixed)
    for (double c : {p - 1.0, p, p + 1.0})
      if (c > -1.0 && c < 1.0) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      fixed.push_back(mid + half * kGlNodes[q]);
      total += half * kGlWeights[q] * range_integral(fixed, remaining - 1);
      fixed.pop_back();
    }
  }
  return total;
}

}  // namespace

double quadrature_mu_n(int d, unsigned n, complexes::ComplexKind kind) {
  (void)kind;  // in one dimension diameter <= 1 and enclosing radius <= 1/2 coincide
  if (d != 1) throw std::invalid_argument("quadrature_mu_n: only d = 1 is supported");
  if (n < 1 || n > 3) throw std::invalid_argument("quadrature_mu_n: n must lie in 1..3");
  std::vector<double> fixed{0.0};
  return range_integral(fixed, n);
}

PointSet random_point_set(int d, std::size_t n, std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::for_trial(seed, index);
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& c : coords) c = rng.uniform();
  return PointSet(d, std::move(coords));
}

geometry::AdjacencyStructure random_graph(std::size_t n, double p, std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::for_trial(seed, index);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.emplace_back(u, v);
  return geometry::AdjacencyStructure(n, edges);
}

}  // namespace rgc::oracle
