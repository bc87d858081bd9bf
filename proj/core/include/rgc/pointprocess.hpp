#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace rgc {

enum class WindowShape { unit_interval, unit_cube };

// Observation window of unit volume: [0,1] or [0,1]^d.
class Window {
 public:
  static Window unit_interval();
  static Window unit_cube(int dim);

  int dim() const { return dim_; }
  WindowShape shape() const { return shape_; }
  double volume() const { return 1.0; }

  bool operator==(const Window&) const = default;

 private:
  Window(int dim, WindowShape shape) : dim_(dim), shape_(shape) {}

  int dim_;
  WindowShape shape_;
};

// A finite list of points in R^d stored row-major. No window constraint;
// geometric operations accept arbitrary finite coordinates.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int dim, std::vector<double> coords);

  static PointSet from_rows(int dim, const std::vector<std::vector<double>>& rows);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> coords() const { return coords_; }

  // Copy of the points at the given indices, in that order.
  PointSet subset(std::span<const std::size_t> indices) const;

 private:
  int dim_ = 1;
  std::vector<double> coords_;
};

struct SampleMeta {
  double intensity = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;

  bool operator==(const SampleMeta&) const = default;
};

// A realization of the point process: every coordinate lies in [0,1].
class PointConfiguration : public PointSet {
 public:
  PointConfiguration(int dim, std::vector<double> coords, SampleMeta meta = {});

  const SampleMeta& meta() const { return meta_; }

 private:
  SampleMeta meta_;
};

// Per-trial seed derived from (seed, index) with a splitmix64 mix, so trial
// streams do not depend on execution order.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

// Portable generator: mt19937_64 plus explicit uniform and Poisson transforms
// (the std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial_index);

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exact Poisson draw: inversion for mean <= 30, PTRS transformed
  // rejection (Hoermann 1993) above.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
};

PointConfiguration sample_poisson(const Window& window, double t, std::uint64_t seed,
                                  std::uint64_t trial_index);

// Text format: header line "d t seed trial_index n", then one point per
// line. Lines starting with '#' are comments.
void write_configuration(std::ostream& out, const PointConfiguration& config);
PointConfiguration read_configuration(std::istream& in);

}  // namespace rgc
