#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rgc/complexes.hpp"

namespace rgc::analytics {

// ---------------------------------------------------------------------------
// Poisson machinery. All evaluations go through log space; k < 0 is an
// impossible event (probability 0, log -inf).

double poisson_log_pmf(double lambda, long long k);
double poisson_pmf(double lambda, long long k);
// P(Po(lambda) <= k), summed from whichever tail is smaller.
double poisson_log_cdf(double lambda, long long k);
double poisson_cdf(double lambda, long long k);
// P(Po(lambda) > k) = P(Po(lambda) >= k+1), so cdf + sf = 1.
double poisson_log_sf(double lambda, long long k);
double poisson_sf(double lambda, long long k);

// e^{-lambda} (e lambda / k)^k; upper bounds P(Po >= k) for k >= lambda,
// lower variant bounds P(Po <= k) for k <= lambda. 0^0 = 1 at k = 0.
double chernoff_log_bound(double lambda, long long k);
double chernoff_upper(double lambda, long long k);
double chernoff_lower(double lambda, long long k);

struct Sandwich {
  double lower;
  double upper;
};

// Bounds on P(Po(lambda) = k), k >= 1. The lower bound is
// e^{-lambda} (lambda e / k)^k / (3 sqrt(2 pi k)); the upper bound is the
// one implied by n! > sqrt(2 pi n)(n/e)^n e^{1/(12n+1)}.
Sandwich poisson_pmf_bounds(double lambda, long long k);

// Logs of the Robbins bounds sqrt(2 pi n)(n/e)^n e^{1/(12n+1)} < n! <
// sqrt(2 pi n)(n/e)^n e^{1/(12n)}.
Sandwich stirling_bounds(long long n);

// ---------------------------------------------------------------------------
// f-vector expectations.

double unit_ball_volume(int d);

// mu_n / (n+1)! * t * rho^n; n = 0 gives t.
double expected_f_n(double t, double rho, unsigned n, double mu_n);

struct Estimate {
  double value;
  double standard_error;
};

// Monte Carlo value of the integral over (B^d)^n of the indicator that
// {0, x_1, ..., x_n} forms a face at distance parameter 1.
Estimate mu_n_estimate(int d, unsigned n, complexes::ComplexKind kind, std::uint64_t samples,
                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Regime predictors and rate functions.

enum class Regime { power_sparse, intermediate, critical, dense };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

struct RegimeSpec {
  int d = 1;
  double t = 0.0;
  double rho = 0.0;  // t * r_t^d
  Regime regime = Regime::dense;
  std::optional<double> B;  // lim rho_t / ln t, critical regime only

  double r() const;  // (rho / t)^{1/d}
  void validate() const;
};

// Unique beta >= 1 with beta ln beta - beta + 1 = c.
double solve_beta(double c);

// Power-sparse prediction: the smallest k with E f_k below this threshold.
inline constexpr double kBoundedFaceCount = 10.0;

struct DimensionPrediction {
  Regime regime;
  double value;                  // predicted D (k for the power-sparse regime)
  std::optional<unsigned> k;     // power-sparse: D in {k-1, k}
  std::optional<double> lambda;  // power-sparse: E f_k at the given t
  std::optional<double> beta;    // critical regime
};

// mu_table[n] supplies mu_n for the power-sparse regime; when absent and
// d = 1 the exact value mu_n = n + 1 is used.
DimensionPrediction predict_dimension(const RegimeSpec& spec,
                                      const std::optional<std::vector<double>>& mu_table = std::nullopt);

struct LdpScaling {
  double n_t;
  double m_t;
};

// Scalings for the intermediate ("sub-logarithmic"), critical and dense
// regimes. The intermediate scaling is ln t / ln(t / rho).
LdpScaling ldp_scaling(Regime regime, double t, double rho, int d);

// Rate function; +infinity outside its effective domain. For the critical
// regime `B` is the effective constant appearing as 1/B in the rate.
double ldp_rate(Regime regime, double x, std::optional<double> B = std::nullopt);

struct GumbelConstants {
  double a;
  double b;
};

GumbelConstants gumbel_constants(double t, double rho);
// (a_t + x b_t - rho) / rho
double epsilon_t(double t, double rho, double x);

// ---------------------------------------------------------------------------
// Scan probabilities on two and three unit cells at intensity rho.

struct ScanPair {
  double rho;
  long long k;
  double p;        // P(some unit window in [0,2] holds >= k points)
  double q_upper;  // bound on P(both [0,2] and [1,3] do)
};

double pk_exact(double rho, long long k);
double qk_upper(double rho, long long k);
ScanPair scan_pair(double rho, long long k);
// sqrt(rho eps^2 / (2 pi)) exp(-rho eps^2 / 2); meaningful once rho eps^2 is
// well above 10 and rho eps^3 is small.
double pk_asymptotic(double rho, double epsilon);

// Limit law of (M - s)/sqrt(s): Phi^2 - phi^2 - x Phi phi.
double corollary_cdf(double x);

// 3 N p^2 + 2 N q.
double chen_stein_bound(std::uint64_t n, double p, double q_upper);

struct ExactRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static ExactRatio make(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const ExactRatio&) const = default;
};

// Probability that a uniformly random up/down path starting at n with m up
// steps and n down steps reaches level k. n + m <= 60.
ExactRatio ballot_reach_probability(unsigned n, unsigned m, unsigned k);

std::uint64_t binomial(unsigned n, unsigned k);

// ---------------------------------------------------------------------------
// Tail bounds for the dimension in the unit cube.

// log of exp{-K P(Po(mu) = k+1)} with K = floor(1/r)^d disjoint balls of
// radius r/2 and mu = kappa_d / 2^d * rho. Bounds log P(D < k).
double lower_tail_log_bound(double t, double rho, int d, long long k);

// log of C r^{-d} e^{-mu'} (mu' e / k)^k with mu' = mu (1 + eps)^d; requires
// k > mu'. log_C is supplied by the caller.
double upper_tail_log_bound(double t, double rho, int d, long long k, double epsilon, double log_C);

}  // namespace rgc::analytics
