#include "rgc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rgc/geometry.hpp"
#include "rgc/pointprocess.hpp"

namespace rgc::analytics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_rate(double lambda, const char* where) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument(std::string(where) + ": lambda must be positive and finite");
}

double log_factorial(long long k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log sum_{j<=k} pmf(j), for k < lambda: terms shrink geometrically going down.
double log_lower_tail(double lambda, long long k) {
  const double anchor = poisson_log_pmf(lambda, k);
  double term = 1.0;
  double sum = 1.0;
  for (long long j = k; j > 0; --j) {
    term *= static_cast<double>(j) / lambda;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return anchor + std::log(sum);
}

// log sum_{j>=k} pmf(j), for k > lambda.
double log_upper_tail(double lambda, long long k) {
  const double anchor = poisson_log_pmf(lambda, k);
  double term = 1.0;
  double sum = 1.0;
  for (long long j = k + 1;; ++j) {
    term *= lambda / static_cast<double>(j);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return anchor + std::log(sum);
}

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double poisson_log_pmf(double lambda, long long k) {
  require_rate(lambda, "poisson_log_pmf");
  if (k < 0) return kNegInf;
  return -lambda + static_cast<double>(k) * std::log(lambda) - log_factorial(k);
}

double poisson_pmf(double lambda, long long k) { return std::exp(poisson_log_pmf(lambda, k)); }

double poisson_log_cdf(double lambda, long long k) {
  require_rate(lambda, "poisson_log_cdf");
  if (k < 0) return kNegInf;
  if (static_cast<double>(k) < lambda) return log_lower_tail(lambda, k);
  return std::log1p(-std::exp(log_upper_tail(lambda, k + 1)));
}

double poisson_cdf(double lambda, long long k) {
  require_rate(lambda, "poisson_cdf");
  if (k < 0) return 0.0;
  if (static_cast<double>(k) < lambda) return std::exp(log_lower_tail(lambda, k));
  return 1.0 - std::exp(log_upper_tail(lambda, k + 1));
}

double poisson_log_sf(double lambda, long long k) {
  require_rate(lambda, "poisson_log_sf");
  if (k < 0) return 0.0;
  if (static_cast<double>(k) < lambda) return std::log1p(-std::exp(log_lower_tail(lambda, k)));
  return log_upper_tail(lambda, k + 1);
}

double poisson_sf(double lambda, long long k) {
  require_rate(lambda, "poisson_sf");
  if (k < 0) return 1.0;
  if (static_cast<double>(k) < lambda) return 1.0 - std::exp(log_lower_tail(lambda, k));
  return std::exp(log_upper_tail(lambda, k + 1));
}

double chernoff_log_bound(double lambda, long long k) {
  require_rate(lambda, "chernoff_log_bound");
  if (k < 0) throw std::invalid_argument("chernoff_log_bound: k must be nonnegative");
  if (k == 0) return -lambda;
  const double kk = static_cast<double>(k);
  return -lambda + kk * (1.0 + std::log(lambda) - std::log(kk));
}

double chernoff_upper(double lambda, long long k) {
  require_rate(lambda, "chernoff_upper");
  if (static_cast<double>(k) < lambda) throw std::invalid_argument("chernoff_upper: requires k >= lambda");
  return std::exp(chernoff_log_bound(lambda, k));
}

double chernoff_lower(double lambda, long long k) {
  require_rate(lambda, "chernoff_lower");
  if (k < 0 || static_cast<double>(k) > lambda)
    throw std::invalid_argument("chernoff_lower: requires 0 <= k <= lambda");
  return std::exp(chernoff_log_bound(lambda, k));
}

Sandwich poisson_pmf_bounds(double lambda, long long k) {
  require_rate(lambda, "poisson_pmf_bounds");
  if (k < 1) throw std::invalid_argument("poisson_pmf_bounds: k must be at least 1");
  const double kk = static_cast<double>(k);
  const double core = chernoff_log_bound(lambda, k) - 0.5 * std::log(2.0 * std::numbers::pi * kk);
  return {std::exp(core - std::log(3.0)), std::exp(core - 1.0 / (12.0 * kk + 1.0))};
}

Sandwich stirling_bounds(long long n) {
  if (n < 1) throw std::invalid_argument("stirling_bounds: n must be at least 1");
  const double nn = static_cast<double>(n);
  const double base = 0.5 * std::log(2.0 * std::numbers::pi * nn) + nn * std::log(nn) - nn;
  return {base + 1.0 / (12.0 * nn + 1.0), base + 1.0 / (12.0 * nn)};
}

double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be at least 1");
  const double h = 0.5 * d;
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0));
}

double expected_f_n(double t, double rho, unsigned n, double mu_n) {
  if (!(t >= 0.0) || !(rho >= 0.0)) throw std::invalid_argument("expected_f_n: t and rho must be nonnegative");
  if (n == 0) return t;
  if (!(mu_n > 0.0)) throw std::invalid_argument("expected_f_n: mu_n must be positive");
  if (rho == 0.0) return 0.0;
  return std::exp(std::log(mu_n) - log_factorial(n + 1) + std::log(t) + n * std::log(rho));
}

Estimate mu_n_estimate(int d, unsigned n, complexes::ComplexKind kind, std::uint64_t samples,
                       std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("mu_n_estimate: d must be at least 1");
  if (n == 0) throw std::invalid_argument("mu_n_estimate: n must be at least 1 (mu_0 = 1)");
  if (samples == 0) throw std::invalid_argument("mu_n_estimate: samples must be positive");
  const auto dim = static_cast<std::size_t>(d);
  Rng rng = Rng::for_trial(seed, 0);
  std::vector<double> coords((n + 1) * dim, 0.0);  // row 0 is the origin
  auto draw_in_ball = [&](double* x) {
    for (;;) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = 2.0 * rng.uniform() - 1.0;
        s += x[k] * x[k];
      }
      if (s <= 1.0) return;
    }
  };
  const double reach2 = (1.0 + geometry::kTolerance) * (1.0 + geometry::kTolerance);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (unsigned i = 1; i <= n; ++i) draw_in_ball(coords.data() + i * dim);
    bool face = true;
    if (kind == complexes::ComplexKind::vietoris_rips) {
      for (unsigned i = 1; i <= n && face; ++i)
        for (unsigned j = i + 1; j <= n && face; ++j) {
          double s2 = 0.0;
          for (std::size_t k = 0; k < dim; ++k) {
            const double diff = coords[i * dim + k] - coords[j * dim + k];
            s2 += diff * diff;
          }
          face = s2 <= reach2;
        }
    } else {
      const PointSet pts(d, coords);
      face = geometry::min_enclosing_ball(pts).radius <= 0.5 + geometry::kTolerance;
    }
    if (face) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  const double scale = std::pow(unit_ball_volume(d), static_cast<double>(n));
  return {scale * frac, scale * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::power_sparse: return "power_sparse";
    case Regime::intermediate: return "intermediate";
    case Regime::critical: return "critical";
    case Regime::dense: return "dense";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view name) {
  if (name == "power_sparse" || name == "i") return Regime::power_sparse;
  if (name == "intermediate" || name == "ii") return Regime::intermediate;
  if (name == "critical" || name == "iii") return Regime::critical;
  if (name == "dense" || name == "iv") return Regime::dense;
  throw std::invalid_argument("unknown regime '" + std::string(name) + "'");
}

double RegimeSpec::r() const { return std::pow(rho / t, 1.0 / d); }

void RegimeSpec::validate() const {
  if (d < 1) throw std::invalid_argument("RegimeSpec: d must be at least 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("RegimeSpec: t must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("RegimeSpec: rho must be positive");
  if (!(rho < t)) throw std::invalid_argument("RegimeSpec: r_t must lie in (0, 1), i.e. rho < t");
  if (regime == Regime::critical) {
    if (!B) throw std::invalid_argument("RegimeSpec: critical regime requires B");
    if (!(*B > 0.0) || !std::isfinite(*B)) throw std::invalid_argument("RegimeSpec: B must lie in (0, inf)");
  }
}

double solve_beta(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("solve_beta: c must be nonnegative and finite");
  if (c == 0.0) return 1.0;
  auto f = [](double b) { return b * std::log(b) - b + 1.0; };
  double lo = 1.0;
  double hi = std::numbers::e;
  while (f(hi) < c) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < c ? lo : hi) = mid;
  }
  double beta = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double slope = std::log(beta);
    if (slope <= 0.0) break;
    const double next = beta - (f(beta) - c) / slope;
    if (!(next >= 1.0)) break;
    beta = next;
  }
  return beta;
}

DimensionPrediction predict_dimension(const RegimeSpec& spec,
                                      const std::optional<std::vector<double>>& mu_table) {
  spec.validate();
  const double kappa = unit_ball_volume(spec.d);
  const double density = kappa / std::pow(2.0, spec.d);
  DimensionPrediction out{spec.regime, 0.0, std::nullopt, std::nullopt, std::nullopt};
  switch (spec.regime) {
    case Regime::power_sparse: {
      if (!mu_table && spec.d != 1)
        throw std::invalid_argument("predict_dimension: power_sparse regime with d >= 2 needs a mu table");
      auto mu = [&](unsigned n) -> double {
        if (n == 0) return 1.0;
        if (mu_table) {
          if (n >= mu_table->size())
            throw std::invalid_argument("predict_dimension: mu table too short for the crossing");
          return (*mu_table)[n];
        }
        return static_cast<double>(n) + 1.0;
      };
      for (unsigned k = 0; k < 100000; ++k) {
        const double ef = expected_f_n(spec.t, spec.rho, k, mu(k));
        if (ef < kBoundedFaceCount) {
          out.k = k;
          out.lambda = ef;
          out.value = static_cast<double>(k);
          return out;
        }
      }
      throw std::invalid_argument("predict_dimension: expected face counts never fall below the threshold");
    }
    case Regime::intermediate: {
      const double lt = std::log(spec.t);
      const double denom = std::log(lt / spec.rho);
      if (!(denom > 0.0))
        throw std::invalid_argument("predict_dimension: intermediate regime needs rho < ln t");
      out.value = lt / denom;
      return out;
    }
    case Regime::critical: {
      const double beta = solve_beta(1.0 / (*spec.B * density));
      out.beta = beta;
      out.value = density * beta * spec.rho;
      return out;
    }
    case Regime::dense:
      out.value = density * spec.rho;
      return out;
  }
  throw std::logic_error("predict_dimension: unhandled regime");
}

LdpScaling ldp_scaling(Regime regime, double t, double rho, int d) {
  if (!(t > 0.0) || !(rho > 0.0)) throw std::invalid_argument("ldp_scaling: t and rho must be positive");
  switch (regime) {
    case Regime::power_sparse:
      throw std::invalid_argument("ldp_scaling: no large deviation principle in the power_sparse regime");
    case Regime::intermediate: {
      const double lt = std::log(t);
      const double denom = std::log(t / rho);
      if (!(denom > 0.0)) throw std::invalid_argument("ldp_scaling: requires t > rho");
      return {lt / denom, lt};
    }
    case Regime::critical:
    case Regime::dense: {
      const double s = unit_ball_volume(d) / std::pow(2.0, d) * rho;
      return {s, s};
    }
  }
  throw std::logic_error("ldp_scaling: unhandled regime");
}

double ldp_rate(Regime regime, double x, std::optional<double> B) {
  if (!std::isfinite(x)) throw std::invalid_argument("ldp_rate: x must be finite");
  switch (regime) {
    case Regime::power_sparse:
      throw std::invalid_argument("ldp_rate: no rate function in the power_sparse regime");
    case Regime::intermediate:
      return x >= 1.0 ? x - 1.0 : kInf;
    case Regime::critical: {
      if (!B || !(*B > 0.0)) throw std::invalid_argument("ldp_rate: critical regime requires B > 0");
      const double beta = solve_beta(1.0 / *B);
      return x >= beta ? 1.0 + x * std::log(x) - x - 1.0 / *B : kInf;
    }
    case Regime::dense:
      return x >= 1.0 ? 1.0 + x * std::log(x) - x : kInf;
  }
  throw std::logic_error("ldp_rate: unhandled regime");
}

GumbelConstants gumbel_constants(double t, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(t))
    throw std::invalid_argument("gumbel_constants: rho must be positive and finite");
  if (!(t > rho)) throw std::invalid_argument("gumbel_constants: requires t > rho");
  const double L = std::log(t / rho);
  const double correction =
      1.0 + std::log(L) / (4.0 * L) - std::log(std::sqrt(std::numbers::pi)) / (2.0 * L);
  return {rho * (1.0 + std::sqrt(2.0 * L / rho) * correction), std::sqrt(rho / (2.0 * L))};
}

double epsilon_t(double t, double rho, double x) {
  const auto g = gumbel_constants(t, rho);
  return (g.a + x * g.b - rho) / rho;
}

double pk_exact(double rho, long long k) {
  require_rate(rho, "pk_exact");
  if (k <= 0) return 1.0;
  const double S = poisson_sf(rho, k - 1);
  double head;
  if (S < 0.5) {
    head = S * (2.0 - S);
  } else {
    const double F = poisson_cdf(rho, k - 1);
    head = 1.0 - F * F;
  }
  const double kk = static_cast<double>(k);
  const double bracket = (kk - rho - 1.0) * poisson_cdf(rho, k - 2) + rho * poisson_pmf(rho, k - 2);
  const double p = head + poisson_pmf(rho, k) * bracket;
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
    throw std::logic_error("pk_exact: probability outside [0,1] for rho=" + std::to_string(rho) +
                           " k=" + std::to_string(k));
  return p;
}

double qk_upper(double rho, long long k) {
  require_rate(rho, "qk_upper");
  if (k < 1) throw std::invalid_argument("qk_upper: k must be at least 1");
  const double S = poisson_sf(rho, k - 1);
  const double p = pk_exact(rho, k);
  double log_sum = kNegInf;
  double log_cdf = poisson_log_pmf(rho, 0);
  for (long long m = 1; m <= k - 1; ++m) {
    const double lp = poisson_log_pmf(rho, m);
    log_cdf = log_add(log_cdf, lp);
    log_sum = log_add(log_sum, 2.0 * std::min(log_cdf, 0.0) - lp);
  }
  const double tail = log_sum == kNegInf ? 0.0 : std::exp(2.0 * poisson_log_pmf(rho, k) + log_sum);
  return S + 2.0 * S * p + tail;
}

ScanPair scan_pair(double rho, long long k) { return {rho, k, pk_exact(rho, k), qk_upper(rho, k)}; }

double pk_asymptotic(double rho, double epsilon) {
  require_rate(rho, "pk_asymptotic");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("pk_asymptotic: epsilon must be positive and finite");
  const double s = rho * epsilon * epsilon;
  return std::sqrt(s / (2.0 * std::numbers::pi)) * std::exp(-0.5 * s);
}

double corollary_cdf(double x) {
  if (std::isnan(x)) throw std::invalid_argument("corollary_cdf: x is NaN");
  if (x == kInf) return 1.0;
  if (x == kNegInf) return 0.0;
  const double P = big_phi(x);
  const double f = phi(x);
  return P * P - f * f - x * P * f;
}

double chen_stein_bound(std::uint64_t n, double p, double q_upper) {
  if (n < 1) throw std::invalid_argument("chen_stein_bound: N must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("chen_stein_bound: p must lie in [0,1]");
  if (!(q_upper >= 0.0)) throw std::invalid_argument("chen_stein_bound: q_upper must be nonnegative");
  const double N = static_cast<double>(n);
  return 3.0 * N * p * p + 2.0 * N * q_upper;
}

ExactRatio ExactRatio::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("ExactRatio: zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? ExactRatio{0, 1} : ExactRatio{num / g, den / g};
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    const std::uint64_t g = std::gcd(r, std::uint64_t{i});
    const std::uint64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(r / g, factor, &r)) throw std::overflow_error("binomial: result exceeds 64 bits");
  }
  return r;
}

ExactRatio ballot_reach_probability(unsigned n, unsigned m, unsigned k) {
  if (std::max(n, m) >= k) return {1, 1};
  if (n + m < k) return {0, 1};
  if (n + m > 60) throw std::length_error("ballot_reach_probability: n + m above 60");
  return ExactRatio::make(binomial(n + m, k), binomial(n + m, n));
}

double lower_tail_log_bound(double t, double rho, int d, long long k) {
  if (k < 0) throw std::invalid_argument("lower_tail_log_bound: k must be nonnegative");
  RegimeSpec spec{d, t, rho, Regime::dense, std::nullopt};
  spec.validate();
  const double K = std::pow(std::floor(1.0 / spec.r()), d);
  const double mu = unit_ball_volume(d) / std::pow(2.0, d) * rho;
  return -K * poisson_pmf(mu, k + 1);
}

double upper_tail_log_bound(double t, double rho, int d, long long k, double epsilon, double log_C) {
  RegimeSpec spec{d, t, rho, Regime::dense, std::nullopt};
  spec.validate();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("upper_tail_log_bound: epsilon must be positive");
  if (!std::isfinite(log_C)) throw std::invalid_argument("upper_tail_log_bound: log_C must be finite");
  const double mu = unit_ball_volume(d) / std::pow(2.0, d) * rho * std::pow(1.0 + epsilon, d);
  const double kk = static_cast<double>(k);
  if (!(kk > mu)) throw std::invalid_argument("upper_tail_log_bound: requires k > mu (1 + eps)^d");
  return log_C - d * std::log(spec.r()) - mu + kk * (1.0 + std::log(mu) - std::log(kk));
}

}  // namespace rgc::analytics
