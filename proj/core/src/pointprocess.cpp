#include "rgc/pointprocess.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rgc {

Window Window::unit_interval() { return Window(1, WindowShape::unit_interval); }

Window Window::unit_cube(int dim) {
  if (dim < 1) throw std::invalid_argument("unit_cube: dimension must be >= 1");
  return Window(dim, WindowShape::unit_cube);
}

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
  for (double c : coords_)
    if (!std::isfinite(c)) throw std::invalid_argument("PointSet: non-finite coordinate");
}

PointSet PointSet::from_rows(int dim, const std::vector<std::vector<double>>& rows) {
  std::vector<double> coords;
  coords.reserve(rows.size() * static_cast<std::size_t>(dim));
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("PointSet: row has wrong dimension");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  return PointSet(dim, std::move(coords));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> coords;
  coords.reserve(indices.size() * static_cast<std::size_t>(dim_));
  for (std::size_t i : indices) {
    auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(dim_, std::move(coords));
}

PointConfiguration::PointConfiguration(int dim, std::vector<double> coords, SampleMeta meta)
    : PointSet(dim, std::move(coords)), meta_(meta) {
  for (double c : this->coords())
    if (c < 0.0 || c > 1.0)
      throw std::invalid_argument("PointConfiguration: coordinate outside [0,1]");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial_index) {
  return Rng(substream_seed(seed, trial_index));
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson: bad mean");
  if (mean == 0.0) return 0;
  return mean <= 30.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
}

std::uint64_t Rng::poisson_inversion(double mean) {
  // Sequential search; e^{-30} is far from underflow.
  double u = uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    double next = cdf + p;
    if (next == cdf) break;  // remaining mass below rounding
    cdf = next;
  }
  return k;
}

std::uint64_t Rng::poisson_ptrs(double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

PointConfiguration sample_poisson(const Window& window, double t, std::uint64_t seed,
                                  std::uint64_t trial_index) {
  if (!std::isfinite(t) || t <= 0.0)
    throw std::invalid_argument("sample_poisson: intensity must be positive and finite");
  Rng rng = Rng::for_trial(seed, trial_index);
  const std::uint64_t n = rng.poisson(t * window.volume());
  const auto d = static_cast<std::size_t>(window.dim());
  std::vector<double> coords(n * d);
  for (double& c : coords) c = rng.uniform();
  return PointConfiguration(window.dim(), std::move(coords), SampleMeta{t, seed, trial_index});
}

void write_configuration(std::ostream& out, const PointConfiguration& config) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", config.meta().intensity);
  out << config.dim() << ' ' << buf << ' ' << config.meta().seed << ' ' << config.meta().trial_index
      << ' ' << config.size() << '\n';
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto p = config.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

PointConfiguration read_configuration(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw std::runtime_error("read_configuration: missing header");
  std::istringstream header(line);
  int dim = 0;
  double t = 0.0;
  std::uint64_t seed = 0, trial = 0, n = 0;
  if (!(header >> dim >> t >> seed >> trial >> n) || dim < 1)
    throw std::runtime_error("read_configuration: malformed header '" + line + "'");
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::uint64_t>(dim));
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!next_content_line(in, line))
      throw std::runtime_error("read_configuration: expected " + std::to_string(n) + " points");
    std::istringstream row(line);
    for (int k = 0; k < dim; ++k) {
      double c;
      if (!(row >> c)) throw std::runtime_error("read_configuration: malformed point '" + line + "'");
      coords.push_back(c);
    }
  }
  return PointConfiguration(dim, std::move(coords), SampleMeta{t, seed, trial});
}

}  // namespace rgc
