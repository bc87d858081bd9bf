#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgc/geometry.hpp"
#include "rgc/pointprocess.hpp"

namespace rgc::complexes {

enum class ComplexKind { vietoris_rips, cech };

std::string_view to_string(ComplexKind kind);
ComplexKind complex_kind_from_string(std::string_view name);  // "vr"/"vietoris_rips", "cech"

struct Participation {
  std::uint64_t points = 0;  // N_n: points lying in some n-face
  std::uint64_t pairs = 0;   // M_n: unordered pairs sharing some n-face

  bool operator==(const Participation&) const = default;
};

struct ComplexSummary {
  ComplexKind kind = ComplexKind::vietoris_rips;
  int dimension = -1;  // -1 for the empty point set
  std::optional<std::vector<std::uint64_t>> f_vector;
  std::optional<std::vector<Participation>> participation;  // entry n holds (N_n, M_n)

  bool operator==(const ComplexSummary&) const = default;
};

// Above this size the exact Cech enumeration refuses inputs with d >= 2;
// grid_scan_bracket is the scalable alternative.
inline constexpr std::size_t kCechExactCap = 4096;

// Maximum clique size of an arbitrary graph (branch and bound with greedy
// colouring bounds over degeneracy-ordered forward neighbourhoods).
std::size_t max_clique_size(const geometry::AdjacencyStructure& graph);

int vr_dimension(const PointSet& points, double r);
int cech_dimension(const PointSet& points, double r);
int cech_dimension_1d(const PointSet& points, double r);
int dimension(const PointSet& points, double r, ComplexKind kind);

std::vector<std::uint64_t> f_vector(const PointSet& points, double r, ComplexKind kind, unsigned n_max);
Participation face_participation(const PointSet& points, double r, ComplexKind kind, unsigned n);

struct ScanBracket {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};

// Brackets the maximum number of points in a closed ball of radius r/2 by
// scanning grid centres of spacing h.
ScanBracket grid_scan_bracket(const PointSet& points, double r, double h);

// Dimension plus, when n_max is given, the f-vector and participation counts
// for n = 0..n_max.
ComplexSummary summarize(const PointSet& points, double r, ComplexKind kind,
                         std::optional<unsigned> n_max = std::nullopt);

std::string to_json(const ComplexSummary& summary);
ComplexSummary summary_from_json(std::string_view text);

}  // namespace rgc::complexes
