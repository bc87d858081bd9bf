#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rgc/analytics.hpp"
#include "rgc/complexes.hpp"
#include "rgc/geometry.hpp"
#include "rgc/pointprocess.hpp"

// Slow reference implementations for cross-checking the fast paths. Each
// one has a hard size cap and throws std::length_error above it.
namespace rgc::oracle {

inline constexpr std::size_t kMaxCliqueVertices = 25;
inline constexpr std::size_t kMaxCechPoints = 20;
inline constexpr unsigned kMaxBallotSteps = 14;

// Largest clique by checking every vertex subset.
std::size_t brute_max_clique(const geometry::AdjacencyStructure& graph);

// Largest subset whose minimum enclosing ball has radius <= r/2, with the
// ball found by trying every support set of at most d+1 points.
std::size_t brute_cech_count(const PointSet& points, double r);

// Radius of the minimum enclosing ball by exhaustive support search.
double brute_enclosing_radius(const PointSet& points, const std::vector<std::size_t>& subset);

// Counts the interleavings of m up and n down steps from level n that
// touch level k.
analytics::ExactRatio enumerate_ballot(unsigned n, unsigned m, unsigned k);

// Deterministic piecewise Gauss-Legendre value of mu_n for d = 1, n <= 3.
double quadrature_mu_n(int d, unsigned n, complexes::ComplexKind kind);

// Seeded test instances: n uniform points in [0,1]^d, and G(n, p).
PointSet random_point_set(int d, std::size_t n, std::uint64_t seed, std::uint64_t index);
geometry::AdjacencyStructure random_graph(std::size_t n, double p, std::uint64_t seed, std::uint64_t index);

}  // namespace rgc::oracle
