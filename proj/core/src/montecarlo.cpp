#include "rgc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "rgc/geometry.hpp"

namespace rgc::montecarlo {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw std::invalid_argument("rho_rule: bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// Runs f(i) for i in [0, count) on `threads` workers; results land at their
// index. A failure is rethrown for the smallest failing index.
template <class T, class F>
std::vector<T> parallel_map(std::uint64_t count, unsigned threads, F&& f) {
  std::vector<T> out(count);
  std::atomic<std::uint64_t> next{0};
  std::mutex failure_mutex;
  std::uint64_t failed_index = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double binomial_se(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

struct MeanSe {
  double mean;
  double variance;  // unbiased
  double se;
};

template <class Range>
MeanSe mean_se(const Range& values) {
  const double n = static_cast<double>(values.size());
  if (values.size() == 0) return {0.0, 0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, var, std::sqrt(var / n)};
}

void require_trials(std::uint64_t trials, const char* where) {
  if (trials == 0) throw std::invalid_argument(std::string(where) + ": trials must be at least 1");
}

std::vector<double> sorted_uniforms(Rng& rng, std::uint64_t n, double scale) {
  std::vector<double> xs(n);
  for (double& x : xs) x = scale * rng.uniform();
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::uint64_t window_max_in(const std::vector<double>& sorted, double lo, double hi) {
  return max_window_count(sorted, lo, hi, 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

RhoRule RhoRule::power(double c, double alpha) {
  RhoRule r;
  r.kind_ = Kind::power;
  r.c_ = c;
  r.exponent_ = alpha;
  return r;
}

RhoRule RhoRule::constant(double c) {
  RhoRule r;
  r.kind_ = Kind::constant;
  r.c_ = c;
  return r;
}

RhoRule RhoRule::log_linear(double c) {
  RhoRule r;
  r.kind_ = Kind::log_linear;
  r.c_ = c;
  return r;
}

RhoRule RhoRule::log_power(double c, double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("rho_rule: log_power requires gamma > 1");
  RhoRule r;
  r.kind_ = Kind::log_power;
  r.c_ = c;
  r.exponent_ = gamma;
  return r;
}

RhoRule RhoRule::table(std::vector<std::pair<double, double>> entries) {
  if (entries.empty()) throw std::invalid_argument("rho_rule: empty table");
  RhoRule r;
  r.kind_ = Kind::table;
  r.table_ = std::move(entries);
  return r;
}

RhoRule RhoRule::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const auto args = split(rest, ':');
  auto need = [&](std::size_t n) {
    if (colon == std::string_view::npos || args.size() != n)
      throw std::invalid_argument("rho_rule: '" + std::string(name) + "' expects " + std::to_string(n) +
                                  " parameter(s)");
  };
  if (name == "power") {
    need(2);
    return power(parse_number(args[0], "c"), parse_number(args[1], "alpha"));
  }
  if (name == "constant") {
    need(1);
    return constant(parse_number(args[0], "c"));
  }
  if (name == "log_linear") {
    need(1);
    return log_linear(parse_number(args[0], "c"));
  }
  if (name == "log_power") {
    need(2);
    return log_power(parse_number(args[0], "c"), parse_number(args[1], "gamma"));
  }
  if (name == "table") {
    need(1);
    std::vector<std::pair<double, double>> entries;
    for (auto item : split(args[0], ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("rho_rule: table entries are t=rho");
      entries.emplace_back(parse_number(item.substr(0, eq), "t"), parse_number(item.substr(eq + 1), "rho"));
    }
    return table(std::move(entries));
  }
  throw std::invalid_argument("rho_rule: unknown rule '" + std::string(name) + "'");
}

double RhoRule::operator()(double t) const {
  switch (kind_) {
    case Kind::power: return c_ * std::pow(t, -exponent_);
    case Kind::constant: return c_;
    case Kind::log_linear: return c_ * std::log(t);
    case Kind::log_power: return c_ * std::pow(std::log(t), exponent_);
    case Kind::table:
      for (const auto& [tt, rho] : table_)
        if (tt == t) return rho;
      throw std::invalid_argument("rho_rule: no table entry for t=" + format_number(t));
  }
  throw std::logic_error("rho_rule: unhandled kind");
}

std::string RhoRule::describe() const {
  switch (kind_) {
    case Kind::power: return "power:" + format_number(c_) + ":" + format_number(exponent_);
    case Kind::constant: return "constant:" + format_number(c_);
    case Kind::log_linear: return "log_linear:" + format_number(c_);
    case Kind::log_power: return "log_power:" + format_number(c_) + ":" + format_number(exponent_);
    case Kind::table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (i) s += ',';
        s += format_number(table_[i].first) + "=" + format_number(table_[i].second);
      }
      return s;
    }
  }
  return "unknown";
}

double ExperimentConfig::r(double t) const { return std::pow(rho(t) / t, 1.0 / window.dim()); }

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials: must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads: must be at least 1");
  if (t_values.empty()) throw std::invalid_argument("t_values: at least one intensity is required");
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t_values: intensities must be positive");
    const double rho_t = rho(t);
    if (!(rho_t > 0.0) || !std::isfinite(rho_t))
      throw std::invalid_argument("rho_rule: rho must be positive at t=" + format_number(t));
    if (!(r(t) < 1.0)) throw std::invalid_argument("rho_rule: r_t must be below 1 at t=" + format_number(t));
  }
  for (unsigned m : moments)
    if (m < 1) throw std::invalid_argument("moments: orders must be at least 1");
}

std::uint64_t t_stream_seed(std::uint64_t master_seed, std::size_t t_index) {
  return substream_seed(master_seed, 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(t_index));
}

// ---------------------------------------------------------------------------

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, std::size_t t_index,
                                    std::optional<unsigned> participation_n) {
  config.validate();
  if (t_index >= config.t_values.size()) throw std::out_of_range("run_trials: t_index out of range");
  const double t = config.t_values[t_index];
  const double r = config.r(t);
  const std::uint64_t seed = t_stream_seed(config.master_seed, t_index);
  const double ball2 = (0.5 * r + geometry::kTolerance) * (0.5 * r + geometry::kTolerance);
  const std::vector<double> centre(static_cast<std::size_t>(config.window.dim()), 0.5);

  return parallel_map<TrialRecord>(config.trials, config.threads, [&](std::uint64_t i) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const PointConfiguration points = sample_poisson(config.window, t, seed, i);
      TrialRecord rec;
      rec.t = t;
      rec.trial_index = i;
      rec.points = points.size();
      rec.dimension = complexes::dimension(points, r, config.complex);
      for (std::size_t j = 0; j < points.size(); ++j)
        if (geometry::squared_distance(points.point(j), centre) <= ball2) ++rec.fixed_ball_count;
      if (participation_n) {
        rec.f_vector = complexes::f_vector(points, r, config.complex, *participation_n);
        rec.participation = complexes::face_participation(points, r, config.complex, *participation_n);
      }
      rec.runtime_ns = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
      return rec;
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(i) + " at t=" + format_number(t) + ": " + e.what());
    }
  });
}

TwoPointEstimate two_point_mass(double t, const std::map<int, std::uint64_t>& counts, std::uint64_t trials,
                                std::optional<unsigned> k) {
  require_trials(trials, "two_point_mass");
  auto count_at = [&](long long d) -> std::uint64_t {
    auto it = counts.find(static_cast<int>(d));
    return it == counts.end() ? 0 : it->second;
  };
  unsigned best_k = 0;
  std::uint64_t best = 0;
  if (k) {
    best_k = *k;
    best = count_at(static_cast<long long>(*k) - 1) + count_at(*k);
  } else if (!counts.empty()) {
    const int hi = counts.rbegin()->first + 1;
    for (int c = std::max(counts.begin()->first, 0); c <= hi; ++c) {
      const std::uint64_t m = count_at(c - 1) + count_at(c);
      if (m > best) {
        best = m;
        best_k = static_cast<unsigned>(c);
      }
    }
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(best) / n;
  constexpr double z = 3.0;
  const double denom = 1.0 + z * z / n;
  const double radius = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  return {t, best_k, p, binomial_se(p, trials), radius};
}

EmpiricalSummary summarize_trials(const ExperimentConfig& config, std::size_t t_index,
                                  const std::vector<TrialRecord>& records) {
  EmpiricalSummary s;
  s.t = config.t_values.at(t_index);
  s.rho = config.rho(s.t);
  s.r = config.r(s.t);
  s.trials = records.size();
  for (const auto& rec : records) {
    ++s.counts[rec.dimension];
    s.max_dimension = std::max(s.max_dimension, rec.dimension);
    s.max_fixed_ball_count = std::max(s.max_fixed_ball_count, rec.fixed_ball_count);
  }
  for (unsigned m : config.moments) {
    std::vector<double> powers;
    powers.reserve(records.size());
    for (const auto& rec : records) powers.push_back(std::pow(static_cast<double>(rec.dimension), m));
    const auto st = mean_se(powers);
    s.moments.push_back({m, st.mean, st.se});
  }
  if (config.k_probe) s.two_point = two_point_mass(s.t, s.counts, s.trials, config.k_probe);
  return s;
}

std::vector<EmpiricalSummary> run_dimension_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<EmpiricalSummary> out;
  for (std::size_t i = 0; i < config.t_values.size(); ++i) out.push_back(summarize_trials(config, i, run_trials(config, i)));
  return out;
}

std::vector<TwoPointEstimate> estimate_two_point(const ExperimentConfig& config, const KRule& k_rule) {
  config.validate();
  std::vector<TwoPointEstimate> out;
  for (std::size_t i = 0; i < config.t_values.size(); ++i) {
    const double t = config.t_values[i];
    const auto summary = summarize_trials(config, i, run_trials(config, i));
    std::optional<unsigned> k = config.k_probe;
    if (k_rule) k = k_rule(t);
    out.push_back(two_point_mass(t, summary.counts, summary.trials, k));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t max_window_count(std::span<const double> all, double lo, double hi, double width) {
  const auto first = std::lower_bound(all.begin(), all.end(), lo);
  const auto last = std::upper_bound(first, all.end(), hi);
  const std::span<const double> sorted(first, last);
  if (sorted.empty()) return 0;
  if (hi - lo <= width) return sorted.size();
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (j < i) j = i;
    const double reach = sorted[i] + width;
    while (j < sorted.size() && sorted[j] <= reach) ++j;
    best = std::max(best, j - i);
    if (j == sorted.size()) break;
  }
  return best;
}

double tv_to_poisson(const std::vector<double>& pmf, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("tv_to_poisson: mean must be nonnegative");
  double sum = 0.0;
  if (mean == 0.0) {
    for (std::size_t i = 0; i < pmf.size(); ++i) sum += std::abs(pmf[i] - (i == 0 ? 1.0 : 0.0));
    if (pmf.empty()) sum += 1.0;
    return 0.5 * sum;
  }
  for (std::size_t i = 0; i < pmf.size(); ++i)
    sum += std::abs(pmf[i] - analytics::poisson_pmf(mean, static_cast<long long>(i)));
  sum += analytics::poisson_sf(mean, static_cast<long long>(pmf.size()) - 1);
  return 0.5 * sum;
}

std::vector<XkResult> simulate_X_k(double t, double rho, const std::vector<long long>& ks, std::uint64_t trials,
                                   std::uint64_t master_seed, unsigned threads) {
  require_trials(trials, "simulate_X_k");
  if (!(t > 0.0) || !(rho > 0.0)) throw std::invalid_argument("simulate_X_k: t and rho must be positive");
  const double r = rho / t;
  if (!(r < 0.5)) throw std::invalid_argument("simulate_X_k: requires r = rho/t < 1/2");
  for (long long k : ks)
    if (k < 1) throw std::invalid_argument("simulate_X_k: k must be at least 1");
  const auto N = static_cast<std::uint64_t>(std::floor(1.0 / r));
  const Window window = Window::unit_interval();

  auto per_trial = parallel_map<std::vector<std::uint64_t>>(trials, threads, [&](std::uint64_t i) {
    const PointConfiguration pts = sample_poisson(window, t, master_seed, i);
    const auto coords = pts.coords();
    // Counting sort into cells [c r, (c+1) r), c = 0..N, then sort each cell.
    std::vector<std::uint64_t> start(N + 2, 0);
    std::vector<std::uint64_t> cell(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j) {
      cell[j] = std::min<std::uint64_t>(static_cast<std::uint64_t>(coords[j] / r), N);
      ++start[cell[j] + 1];
    }
    for (std::uint64_t c = 0; c <= N; ++c) start[c + 1] += start[c];
    std::vector<double> sorted(coords.size());
    std::vector<std::uint64_t> fill(start.begin(), start.end() - 1);
    for (std::size_t j = 0; j < coords.size(); ++j) sorted[fill[cell[j]]++] = coords[j];
    for (std::uint64_t c = 0; c <= N; ++c)
      std::sort(sorted.begin() + static_cast<std::ptrdiff_t>(start[c]),
                sorted.begin() + static_cast<std::ptrdiff_t>(start[c + 1]));

    std::vector<std::uint64_t> x(ks.size(), 0);
    for (std::uint64_t n = 1; n <= N; ++n) {
      const std::uint64_t a = start[n];
      const std::uint64_t b = start[std::min<std::uint64_t>(n + 2, N + 1)];
      const double lo = static_cast<double>(n) * r;
      const double hi = std::min(static_cast<double>(n + 2) * r, 1.0);
      const std::uint64_t m =
          max_window_count(std::span<const double>(sorted.data() + a, b - a), lo, hi, r);
      for (std::size_t q = 0; q < ks.size(); ++q)
        if (m >= static_cast<std::uint64_t>(ks[q])) ++x[q];
    }
    return x;
  });

  std::vector<XkResult> out;
  for (std::size_t q = 0; q < ks.size(); ++q) {
    XkResult res;
    res.k = ks[q];
    res.N = N;
    res.samples.reserve(trials);
    std::uint64_t max_value = 0;
    for (const auto& row : per_trial) {
      res.samples.push_back(row[q]);
      max_value = std::max(max_value, row[q]);
    }
    std::vector<double> as_double(res.samples.begin(), res.samples.end());
    const auto st = mean_se(as_double);
    res.mean = st.mean;
    res.standard_error = st.se;
    res.pmf.assign(max_value + 1, 0.0);
    for (auto v : res.samples) res.pmf[v] += 1.0;
    for (double& p : res.pmf) {
      p /= static_cast<double>(trials);
      res.tv_error += 0.5 * binomial_se(p, trials);
    }
    res.tv = tv_to_poisson(res.pmf, res.mean);
    out.push_back(std::move(res));
  }
  return out;
}

XkResult simulate_X_k(double t, double rho, long long k, std::uint64_t trials, std::uint64_t master_seed,
                      unsigned threads) {
  return simulate_X_k(t, rho, std::vector<long long>{k}, trials, master_seed, threads).front();
}

std::vector<PqEstimate> mc_pq(double rho, const std::vector<long long>& ks, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned threads) {
  require_trials(trials, "mc_pq");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("mc_pq: rho must be positive");
  struct Maxima {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
  };
  const auto maxima = parallel_map<Maxima>(trials, threads, [&](std::uint64_t i) {
    Rng rng = Rng::for_trial(master_seed, i);
    const auto xs = sorted_uniforms(rng, rng.poisson(3.0 * rho), 3.0);
    return Maxima{window_max_in(xs, 0.0, 2.0), window_max_in(xs, 1.0, 3.0)};
  });
  std::vector<PqEstimate> out;
  for (long long k : ks) {
    std::uint64_t p = 0, q = 0;
    for (const auto& m : maxima) {
      const bool left = k <= 0 || m.left >= static_cast<std::uint64_t>(k);
      const bool right = k <= 0 || m.right >= static_cast<std::uint64_t>(k);
      p += left;
      q += left && right;
    }
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(p) / n;
    const double qh = static_cast<double>(q) / n;
    out.push_back({k, ph, binomial_se(ph, trials), qh, binomial_se(qh, trials)});
  }
  return out;
}

PqEstimate mc_pq(double rho, long long k, std::uint64_t trials, std::uint64_t master_seed, unsigned threads) {
  return mc_pq(rho, std::vector<long long>{k}, trials, master_seed, threads).front();
}

std::vector<double> simulate_scaled_scan(double s, std::uint64_t trials, std::uint64_t master_seed,
                                         unsigned threads) {
  require_trials(trials, "simulate_scaled_scan");
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("simulate_scaled_scan: s must be positive");
  const double root = std::sqrt(s);
  return parallel_map<double>(trials, threads, [&](std::uint64_t i) {
    Rng rng = Rng::for_trial(master_seed, i);
    const auto xs = sorted_uniforms(rng, rng.poisson(2.0 * s), 2.0);
    return (static_cast<double>(max_window_count(xs, 0.0, 2.0, 1.0)) - s) / root;
  });
}

double empirical_cdf(const std::vector<double>& samples, double x) {
  if (samples.empty()) throw std::invalid_argument("empirical_cdf: no samples");
  const auto below = std::count_if(samples.begin(), samples.end(), [x](double v) { return v <= x; });
  return static_cast<double>(below) / static_cast<double>(samples.size());
}

// ---------------------------------------------------------------------------

std::vector<LdpEstimate> estimate_ldp_rate(const ExperimentConfig& config, double a) {
  config.validate();
  if (!config.regime) throw std::invalid_argument("regime: required for LDP estimates");
  if (!std::isfinite(a)) throw std::invalid_argument("a: must be finite");
  std::vector<LdpEstimate> out;
  for (std::size_t i = 0; i < config.t_values.size(); ++i) {
    const double t = config.t_values[i];
    LdpEstimate e;
    e.t = t;
    e.rho = config.rho(t);
    const auto sc = analytics::ldp_scaling(*config.regime, t, e.rho, config.window.dim());
    e.n_t = sc.n_t;
    e.m_t = sc.m_t;
    e.threshold = a * sc.n_t;
    const auto records = run_trials(config, i);
    std::uint64_t hits = 0;
    for (const auto& rec : records) hits += static_cast<double>(rec.dimension) >= e.threshold;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(config.trials);
    if (hits == 0) {
      e.floored = true;
      e.value = std::log(static_cast<double>(config.trials)) / e.m_t;
      e.standard_error = 0.0;
    } else {
      e.value = -std::log(e.p_hat) / e.m_t;
      e.standard_error = binomial_se(e.p_hat, config.trials) / (e.p_hat * e.m_t);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<ParticipationStats> participation_statistics(const ExperimentConfig& config, unsigned n) {
  config.validate();
  if (n < 1) throw std::invalid_argument("n: must be at least 1");
  std::vector<ParticipationStats> out;
  for (std::size_t i = 0; i < config.t_values.size(); ++i) {
    const auto records = run_trials(config, i, n);
    std::vector<double> N, M;
    std::uint64_t below = 0;
    for (const auto& rec : records) {
      N.push_back(static_cast<double>(rec.participation->points));
      M.push_back(static_cast<double>(rec.participation->pairs));
      below += rec.dimension < static_cast<int>(n);
    }
    const auto sn = mean_se(N);
    const auto sm = mean_se(M);
    ParticipationStats st;
    st.t = config.t_values[i];
    st.n = n;
    st.mean_N = sn.mean;
    st.var_N = sn.variance;
    st.se_N = sn.se;
    st.mean_M = sm.mean;
    st.se_M = sm.se;
    st.p_below = static_cast<double>(below) / static_cast<double>(records.size());
    st.p_at_least = 1.0 - st.p_below;
    st.second_moment_bound =
        sn.mean > 0.0 ? sn.variance / (sn.mean * sn.mean) : std::numeric_limits<double>::infinity();
    const double nn = n;
    st.pair_bound_printed = 2.0 * sm.mean / ((nn + 1.0) * (nn + 2.0));
    st.pair_bound = 2.0 * sm.mean / (nn * (nn + 1.0));
    out.push_back(st);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "# rgc-dim v" << kToolVersion << " seed=" << seed << '\n';
  for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
  for (const auto& note : notes) out << "# " << note << '\n';
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << "t,rho,r_t,statistic,value,stderr,trials,seed\n";
  for (const auto& row : rows) {
    out << cell(row.t) << ',' << cell(row.rho) << ',' << cell(row.r) << ',' << row.statistic << ','
        << format_number(row.value) << ',' << cell(row.standard_error) << ',' << row.trials << ',' << row.seed
        << '\n';
  }
}

void ResultTable::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json cfg;
  cfg["tool"] = "rgc-dim";
  cfg["version"] = kToolVersion;
  cfg["seed"] = seed;
  for (const auto& [key, value] : config) cfg[key] = value;
  if (!notes.empty()) cfg["notes"] = notes;
  doc["config"] = cfg;
  auto results = nlohmann::ordered_json::array();
  auto num = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    if (std::isfinite(*v)) return *v;
    return format_number(*v);
  };
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["t"] = num(row.t);
    j["rho"] = num(row.rho);
    j["r_t"] = num(row.r);
    j["statistic"] = row.statistic;
    j["value"] = num(row.value);
    j["stderr"] = num(row.standard_error);
    j["trials"] = row.trials;
    j["seed"] = row.seed;
    results.push_back(std::move(j));
  }
  doc["results"] = std::move(results);
  out << doc.dump(2) << '\n';
}

std::vector<ResultRow> to_rows(const EmpiricalSummary& s, std::uint64_t seed) {
  std::vector<ResultRow> rows;
  auto add = [&](std::string name, double value, std::optional<double> se) {
    rows.push_back({s.t, s.rho, s.r, std::move(name), value, se, s.trials, seed});
  };
  for (const auto& m : s.moments) add("moment_" + std::to_string(m.m), m.value, m.standard_error);
  for (const auto& [dim, count] : s.counts) {
    const double p = static_cast<double>(count) / static_cast<double>(s.trials);
    add("p_dim_" + std::to_string(dim), p, binomial_se(p, s.trials));
  }
  if (s.two_point)
    add("two_point_mass_k" + std::to_string(s.two_point->k), s.two_point->mass, s.two_point->standard_error);
  add("max_dimension", s.max_dimension, std::nullopt);
  add("max_fixed_ball_count", static_cast<double>(s.max_fixed_ball_count), std::nullopt);
  return rows;
}

}  // namespace rgc::montecarlo
