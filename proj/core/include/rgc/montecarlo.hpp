#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgc/analytics.hpp"
#include "rgc/complexes.hpp"
#include "rgc/pointprocess.hpp"

namespace rgc::montecarlo {

// rho as a function of t. Text form (see parse/describe):
//   power:c:alpha       c * t^-alpha
//   constant:c          c
//   log_linear:c        c * ln t
//   log_power:c:gamma   c * (ln t)^gamma, gamma > 1
//   table:t1=r1,t2=r2   explicit values
class RhoRule {
 public:
  enum class Kind { power, constant, log_linear, log_power, table };

  static RhoRule power(double c, double alpha);
  static RhoRule constant(double c);
  static RhoRule log_linear(double c);
  static RhoRule log_power(double c, double gamma);
  static RhoRule table(std::vector<std::pair<double, double>> entries);
  static RhoRule parse(std::string_view text);

  double operator()(double t) const;
  std::string describe() const;
  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::constant;
  double c_ = 1.0;
  double exponent_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

struct ExperimentConfig {
  Window window = Window::unit_interval();
  complexes::ComplexKind complex = complexes::ComplexKind::vietoris_rips;
  std::vector<double> t_values;
  RhoRule rho_rule = RhoRule::constant(1.0);
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<unsigned> k_probe;
  std::vector<unsigned> moments{1, 2};
  std::optional<analytics::Regime> regime;
  unsigned threads = 1;  // never affects results

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  double rho(double t) const { return rho_rule(t); }
  double r(double t) const;
};

// Seed for all trials at position `t_index` of t_values.
std::uint64_t t_stream_seed(std::uint64_t master_seed, std::size_t t_index);

struct TrialRecord {
  double t = 0.0;
  std::uint64_t trial_index = 0;
  int dimension = -1;
  std::uint64_t runtime_ns = 0;
  std::uint64_t points = 0;
  std::uint64_t fixed_ball_count = 0;  // points in B(centre of window, r/2)
  std::optional<std::vector<std::uint64_t>> f_vector;
  std::optional<complexes::Participation> participation;
};

struct MomentEstimate {
  unsigned m;
  double value;
  double standard_error;
};

struct TwoPointEstimate {
  double t;
  unsigned k;         // mass on {k-1, k}
  double mass;
  double standard_error;
  double radius;      // Wilson half-width at z = 3
};

struct EmpiricalSummary {
  double t = 0.0;
  double rho = 0.0;
  double r = 0.0;
  std::uint64_t trials = 0;
  std::map<int, std::uint64_t> counts;  // dimension -> frequency
  std::vector<MomentEstimate> moments;
  std::optional<TwoPointEstimate> two_point;
  int max_dimension = -1;
  std::uint64_t max_fixed_ball_count = 0;
};

// Per-trial records for t_values[t_index]; trial failures are rethrown with
// the trial index attached.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, std::size_t t_index,
                                    std::optional<unsigned> participation_n = std::nullopt);

EmpiricalSummary summarize_trials(const ExperimentConfig& config, std::size_t t_index,
                                  const std::vector<TrialRecord>& records);

std::vector<EmpiricalSummary> run_dimension_experiment(const ExperimentConfig& config);

// Mass on {k-1, k}; without a rule k is the one maximising that mass.
using KRule = std::function<unsigned(double t)>;
TwoPointEstimate two_point_mass(double t, const std::map<int, std::uint64_t>& counts,
                                std::uint64_t trials, std::optional<unsigned> k);
std::vector<TwoPointEstimate> estimate_two_point(const ExperimentConfig& config,
                                                 const KRule& k_rule = {});

// ---------------------------------------------------------------------------
// Scan statistics in one dimension.

// Maximum number of sorted points inside a closed window [a, a + width]
// with lo <= a and a + width <= hi; if hi - lo <= width, every point counts.
std::uint64_t max_window_count(std::span<const double> sorted, double lo, double hi, double width);

struct XkResult {
  long long k = 0;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> samples;
  double mean = 0.0;
  double standard_error = 0.0;
  std::vector<double> pmf;  // empirical law on 0..max
  double tv = 0.0;          // to Poisson(mean)
  double tv_error = 0.0;
};

// X^(k) = sum_{n=1}^{N} X_n^(k), N = floor(1/r), r = rho/t, where X_n^(k)
// flags a length-r interval with >= k points inside [n r, (n+2) r) n [0,1).
// One pass per trial serves every requested k.
std::vector<XkResult> simulate_X_k(double t, double rho, const std::vector<long long>& ks,
                                   std::uint64_t trials, std::uint64_t master_seed, unsigned threads = 1);
XkResult simulate_X_k(double t, double rho, long long k, std::uint64_t trials, std::uint64_t master_seed,
                      unsigned threads = 1);

struct PqEstimate {
  long long k = 0;
  double p_hat = 0.0;
  double p_se = 0.0;
  double q_hat = 0.0;
  double q_se = 0.0;
};

// Poisson(rho) points per unit on [0,3]; p: M over [0,2] >= k, q: M over
// [0,2] and over [1,3] both >= k.
std::vector<PqEstimate> mc_pq(double rho, const std::vector<long long>& ks, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned threads = 1);
PqEstimate mc_pq(double rho, long long k, std::uint64_t trials, std::uint64_t master_seed,
                 unsigned threads = 1);

// (M - s) / sqrt(s) with M the unit-window maximum on [0,2] at intensity s.
std::vector<double> simulate_scaled_scan(double s, std::uint64_t trials, std::uint64_t master_seed,
                                         unsigned threads = 1);

double empirical_cdf(const std::vector<double>& samples, double x);

// 1/2 [sum_{i<=max} |p_i - Po(mean)(i)| + P(Po(mean) > max)].
double tv_to_poisson(const std::vector<double>& pmf, double mean);

// ---------------------------------------------------------------------------
// Large deviations and participation counts.

struct LdpEstimate {
  double t = 0.0;
  double rho = 0.0;
  double n_t = 0.0;
  double m_t = 0.0;
  double threshold = 0.0;  // a * n_t
  double p_hat = 0.0;      // P(D >= threshold)
  double value = 0.0;      // -log(p_hat) / m_t, or the floor
  double standard_error = 0.0;
  bool floored = false;    // p_hat = 0; value is -log(1/trials) / m_t
};

// Requires config.regime (one of intermediate, critical, dense).
std::vector<LdpEstimate> estimate_ldp_rate(const ExperimentConfig& config, double a);

struct ParticipationStats {
  double t = 0.0;
  unsigned n = 0;
  double mean_N = 0.0;
  double var_N = 0.0;
  double se_N = 0.0;
  double mean_M = 0.0;
  double se_M = 0.0;
  double p_below = 0.0;        // P(D < n)
  double p_at_least = 0.0;     // P(D >= n)
  double second_moment_bound;  // Var N / (E N)^2, +inf when E N = 0
  double pair_bound_printed;   // 2 E M / ((n+1)(n+2))
  double pair_bound;           // 2 E M / (n (n+1)), from M_n >= C(n+1, 2)
};

std::vector<ParticipationStats> participation_statistics(const ExperimentConfig& config, unsigned n);

// ---------------------------------------------------------------------------
// Tabular output.

// Unset t, rho or r_t fields print as empty CSV cells (JSON null).
struct ResultRow {
  std::optional<double> t;
  std::optional<double> rho;
  std::optional<double> r;
  std::string statistic;
  double value = 0.0;
  std::optional<double> standard_error;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;  // echoed in order
  std::vector<ResultRow> rows;
  std::vector<std::string> notes;  // "# " lines after the config echo

  void add(ResultRow row) { rows.push_back(std::move(row)); }
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

std::vector<ResultRow> to_rows(const EmpiricalSummary& summary, std::uint64_t seed);

// Shortest round-trip decimal form, stable across runs.
std::string format_number(double value);

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace rgc::montecarlo
