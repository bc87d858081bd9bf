#include "rgc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgc/analytics.hpp"
#include "rgc/complexes.hpp"
#include "rgc/montecarlo.hpp"
#include "rgc/oracle.hpp"
#include "rgc/pointprocess.hpp"

namespace rgc::cli {

namespace {

namespace an = rgc::analytics;
namespace mc = rgc::montecarlo;
using complexes::ComplexKind;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return mc::format_number(v); }

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t u = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (auto [p, ec] = std::from_chars(first, last, u); ec == std::errc{} && p == last) return u;
  double v = 0.0;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last || !(v >= 0.0) || v > 9007199254740992.0 || std::floor(v) != v)
    throw UsageError(key + ": expected a nonnegative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& key, std::string_view text) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v))
    throw UsageError(key + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(',', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::vector<double> parse_reals(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (auto part : split_commas(text)) out.push_back(parse_real(key, part));
  return out;
}

// "8", "6,7,8" or the inclusive range "6:12".
std::vector<long long> parse_k_list(const std::string& key, const std::string& text) {
  std::vector<long long> out;
  auto one = [&](std::string_view s) {
    const double v = parse_real(key, s);
    if (std::floor(v) != v || v < 0 || v > 1e15) throw UsageError(key + ": expected nonnegative integers");
    return static_cast<long long>(v);
  };
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const long long lo = one(std::string_view(text).substr(0, colon));
    const long long hi = one(std::string_view(text).substr(colon + 1));
    if (hi < lo) throw UsageError(key + ": empty range '" + text + "'");
    for (long long k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (auto part : split_commas(text)) out.push_back(one(part));
  return out;
}

ComplexKind parse_complex(const std::string& text) {
  try {
    return complexes::complex_kind_from_string(text);
  } catch (const std::exception&) {
    throw UsageError("complex: expected 'vr' or 'cech', got '" + text + "'");
  }
}

an::Regime parse_regime(const std::string& text) {
  try {
    return an::regime_from_string(text);
  } catch (const std::exception&) {
    throw UsageError("regime: expected power_sparse, intermediate, critical or dense, got '" + text + "'");
  }
}

// Every flag any subcommand understands; each subcommand registers the ones
// it uses.
struct Options {
  int d = 1;
  double t = 0.0, rho = 0.0, r = 0.0, B = 0.0, a = 0.0;
  std::string complex = "vr";
  std::string trials;
  std::string seed = "0";
  std::string trial = "0";
  std::string k;
  std::string x;
  std::string out;
  std::string format = "csv";
  std::string regime;
  std::string input;
  std::string rho_rule;
  std::string t_values;
  std::string moments = "1,2";
  std::string mu;
  unsigned threads = 1;
  unsigned n_max = 3;
};

void add_config_flag(CLI::App* app) {
  app->add_option("--config", "TOML/INI file with flag defaults (flags win)");
}

struct Registered {
  CLI::App* app;
  Options& o;
  std::string trials_default{};

  bool given(const std::string& flag) const { return app->count(flag) > 0; }
  void apply_defaults() const {
    if (app->parsed() && o.trials.empty()) o.trials = trials_default;
  }
  void d() { app->add_option("--d", o.d, "Ambient dimension")->check(CLI::Range(1, 8)); }
  void t(const std::string& help = "Intensity t") { app->add_option("--t", o.t, help); }
  void rho() { app->add_option("--rho", o.rho, "Density parameter rho = t r^d"); }
  void r() { app->add_option("--r", o.r, "Distance parameter r (overrides --rho)"); }
  void complex() { app->add_option("--complex", o.complex, "Complex: vr | cech"); }
  void trials(const std::string& def) {
    trials_default = def;
    app->add_option("--trials", o.trials, "Number of trials (scientific notation accepted)");
  }
  void seed() { app->add_option("--seed", o.seed, "Master seed (u64)"); }
  void threads() { app->add_option("--threads", o.threads, "Worker threads; results do not depend on it"); }
  void output() {
    app->add_option("--out", o.out, "Output file (written only on success)");
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    add_config_flag(app);
  }
};

std::uint64_t seed_of(const Options& o) { return parse_count("seed", o.seed); }

std::uint64_t trials_of(const Options& o) {
  const auto n = parse_count("trials", o.trials);
  if (n == 0) throw UsageError("trials: must be at least 1");
  return n;
}

void require(const Registered& reg, const std::string& flag) {
  if (!reg.given(flag)) throw UsageError(flag.substr(2) + ": required");
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(key + ": must be positive");
}

std::string render(const mc::ResultTable& table, const std::string& format) {
  std::ostringstream s;
  if (format == "json")
    table.write_json(s);
  else
    table.write_csv(s);
  return s.str();
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path target(o.out);
  std::filesystem::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw UsageError("out: cannot open '" + o.out + "' for writing");
    f << text;
    if (!f.flush()) throw UsageError("out: write failed for '" + o.out + "'");
  }
  std::filesystem::rename(tmp, target);
}

mc::ResultRow row(std::optional<double> t, std::optional<double> rho, std::optional<double> r, std::string stat,
                  double value, std::optional<double> se, std::uint64_t trials, std::uint64_t seed) {
  return {t, rho, r, std::move(stat), value, se, trials, seed};
}

// ---------------------------------------------------------------------------

struct Loaded {
  PointSet points;
  double t;
  double r;
  std::optional<double> rho;
  std::uint64_t seed;
  std::vector<std::pair<std::string, std::string>> echo;
};

// Shared by dim and fvector: a configuration from --input or sampled from
// (--d, --t, --seed, --trial), plus r from --r or --rho.
Loaded load_points(const Registered& reg) {
  const Options& o = reg.o;
  Loaded L;
  std::optional<PointConfiguration> config;
  if (reg.given("--input")) {
    std::ifstream in(o.input);
    if (!in) throw UsageError("input: cannot open '" + o.input + "'");
    try {
      config = read_configuration(in);
    } catch (const std::exception& e) {
      throw UsageError(std::string("input: ") + e.what());
    }
    L.echo.emplace_back("input", o.input);
  } else {
    require(reg, "--t");
    require_positive("t", o.t);
    const auto trial = parse_count("trial", o.trial);
    config = sample_poisson(o.d == 1 ? Window::unit_interval() : Window::unit_cube(o.d), o.t, seed_of(o), trial);
    L.echo.emplace_back("d", std::to_string(o.d));
    L.echo.emplace_back("t", fmt(o.t));
    L.echo.emplace_back("trial", std::to_string(trial));
  }
  L.seed = config->meta().seed;
  L.t = reg.given("--t") ? o.t : config->meta().intensity;
  const int d = config->dim();
  if (reg.given("--r")) {
    require_positive("r", o.r);
    L.r = o.r;
    L.echo.emplace_back("r", fmt(o.r));
  } else if (reg.given("--rho")) {
    require_positive("rho", o.rho);
    if (!(L.t > 0.0)) throw UsageError("rho: needs a positive t to convert to r");
    L.rho = o.rho;
    L.r = std::pow(o.rho / L.t, 1.0 / d);
    L.echo.emplace_back("rho", fmt(o.rho));
  } else {
    throw UsageError("r: one of --r or --rho is required");
  }
  if (L.t > 0.0 && !L.rho) L.rho = L.t * std::pow(L.r, d);
  L.points = std::move(*config);
  return L;
}

// ---------------------------------------------------------------------------
// verify: oracle cross-checks.

struct Check {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
};

std::vector<Check> verify_suite(std::uint64_t instances, std::uint64_t seed) {
  std::vector<Check> checks;
  {
    Check c{"vr_dimension_vs_brute_clique"};
    for (std::uint64_t i = 0; i < instances; ++i) {
      Rng pick = Rng::for_trial(seed ^ 0x11, i);
      const int d = 1 + static_cast<int>(i % 2);
      const auto n = 1 + static_cast<std::size_t>(pick.uniform() * 20);
      const double r = 0.05 + 0.5 * pick.uniform();
      const auto pts = oracle::random_point_set(d, n, seed, i);
      const auto expect = static_cast<int>(oracle::brute_max_clique(geometry::build_adjacency(pts, r))) - 1;
      ++c.cases;
      c.mismatches += complexes::vr_dimension(pts, r) != expect;
    }
    checks.push_back(c);
  }
  {
    Check c{"cech_dimension_vs_brute_count"};
    for (std::uint64_t i = 0; i < instances; ++i) {
      Rng pick = Rng::for_trial(seed ^ 0x22, i);
      const int d = 1 + static_cast<int>(i % 2);
      const auto n = 1 + static_cast<std::size_t>(pick.uniform() * 14);
      const double r = 0.05 + 0.5 * pick.uniform();
      const auto pts = oracle::random_point_set(d, n, seed ^ 0x22, i);
      const auto expect = static_cast<int>(oracle::brute_cech_count(pts, r)) - 1;
      ++c.cases;
      c.mismatches += complexes::cech_dimension(pts, r) != expect;
    }
    checks.push_back(c);
  }
  {
    Check c{"cech_1d_vs_general"};
    for (std::uint64_t i = 0; i < instances; ++i) {
      Rng pick = Rng::for_trial(seed ^ 0x33, i);
      const auto n = 1 + static_cast<std::size_t>(pick.uniform() * 40);
      const double r = 0.02 + 0.4 * pick.uniform();
      const auto pts = oracle::random_point_set(1, n, seed ^ 0x33, i);
      ++c.cases;
      c.mismatches += complexes::cech_dimension_1d(pts, r) != complexes::cech_dimension(pts, r);
    }
    checks.push_back(c);
  }
  {
    Check c{"ballot_vs_enumeration"};
    for (unsigned total = 1; total <= 12; ++total)
      for (unsigned n = 0; n <= total; ++n)
        for (unsigned k = 1; k <= total; ++k) {
          const unsigned m = total - n;
          if (!(n < k && m < k)) continue;
          ++c.cases;
          c.mismatches += !(an::ballot_reach_probability(n, m, k) == oracle::enumerate_ballot(n, m, k));
        }
    checks.push_back(c);
  }
  {
    Check c{"mu_n_quadrature_vs_closed_form"};
    for (unsigned n = 1; n <= 3; ++n) {
      ++c.cases;
      c.mismatches += std::abs(oracle::quadrature_mu_n(1, n, ComplexKind::vietoris_rips) - (n + 1.0)) > 1e-8;
    }
    checks.push_back(c);
  }
  {
    Check c{"pk_exact_spot_values"};
    c.cases = 2;
    c.mismatches += an::pk_exact(5.0, 0) != 1.0;
    c.mismatches += std::abs(an::pk_exact(std::log(2.0), 1) - 0.75) > 1e-12;
    checks.push_back(c);
  }
  return checks;
}

// Appends "--key value" for every config-file entry whose flag is absent
// from the command line, so explicit flags always win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  const std::string& command = args[1];
  std::vector<std::string> expanded = args;
  for (const auto& item : CLI::ConfigTOML().from_config(in)) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents.front() == command)) continue;
    const std::string flag = "--" + item.name;
    const bool given = std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || item.inputs.empty()) continue;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    expanded.push_back(flag);
    expanded.push_back(value);
  }
  return expanded;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dimension of random Vietoris-Rips and Cech complexes: simulation and closed forms", "rgc-dim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mc::kToolVersion));
  Options o;

  auto* sample = app.add_subcommand("sample", "Sample a Poisson configuration and dump it");
  Registered s_sample{sample, o};
  s_sample.d();
  s_sample.t();
  s_sample.seed();
  sample->add_option("--trial", o.trial, "Trial index within the seed");
  sample->add_option("--out", o.out, "Output file (written only on success)");
  sample->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "csv", "json"}));
  add_config_flag(sample);

  auto* dim = app.add_subcommand("dim", "Dimension of a supplied or sampled configuration");
  auto* fvec = app.add_subcommand("fvector", "Truncated f-vector of a configuration");
  std::vector<Registered> geometric{{dim, o}, {fvec, o}};
  for (auto& reg : geometric) {
    reg.d();
    reg.t();
    reg.rho();
    reg.r();
    reg.complex();
    reg.seed();
    reg.output();
    reg.app->add_option("--trial", o.trial, "Trial index within the seed");
    reg.app->add_option("--input", o.input, "Configuration file (as written by sample)");
  }
  fvec->add_option("--n-max", o.n_max, "Largest face dimension counted");

  auto* predict = app.add_subcommand("predict", "Regime predictors for the dimension");
  Registered s_predict{predict, o};
  s_predict.d();
  s_predict.t();
  s_predict.rho();
  s_predict.output();
  predict->add_option("--regime", o.regime, "power_sparse | intermediate | critical | dense")->required();
  predict->add_option("--B", o.B, "lim rho/ln t (critical regime)");
  predict->add_option("--mu", o.mu, "Comma list mu_1,mu_2,... for the power_sparse regime");

  auto* pq = app.add_subcommand("pq", "Exact scan probabilities against simulation");
  Registered s_pq{pq, o};
  s_pq.rho();
  s_pq.trials("1e5");
  s_pq.seed();
  s_pq.threads();
  s_pq.output();
  pq->add_option("--k", o.k, "k, a comma list, or a range lo:hi")->required();

  auto* gumbel = app.add_subcommand("gumbel", "Gumbel centring and scaling constants");
  Registered s_gumbel{gumbel, o};
  s_gumbel.t();
  s_gumbel.rho();
  s_gumbel.output();
  gumbel->add_option("--x", o.x, "Comma list of x values")->default_str("-1,0,1");

  auto* ldp = app.add_subcommand("ldp", "Rate function values and empirical estimates");
  Registered s_ldp{ldp, o};
  s_ldp.d();
  s_ldp.complex();
  s_ldp.trials("200");
  s_ldp.seed();
  s_ldp.threads();
  s_ldp.output();
  ldp->add_option("--regime", o.regime, "intermediate | critical | dense")->required();
  ldp->add_option("--x", o.x, "Comma list of points for I(x)");
  ldp->add_option("--B", o.B, "Effective constant in the critical rate");
  ldp->add_option("--a", o.a, "Threshold multiple for empirical estimates");
  ldp->add_option("--t-values", o.t_values, "Comma list of intensities for empirical estimates");
  ldp->add_option("--rho-rule", o.rho_rule, "rho(t) rule, e.g. log_power:1:2");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo dimension experiment");
  Registered s_exp{experiment, o};
  s_exp.d();
  s_exp.complex();
  s_exp.trials("100");
  s_exp.seed();
  s_exp.threads();
  s_exp.output();
  experiment->add_option("--t-values", o.t_values, "Comma list of intensities")->required();
  experiment->add_option("--rho-rule", o.rho_rule, "rho(t) rule, e.g. constant:400 or log_power:1:2")
      ->required();
  experiment->add_option("--k", o.k, "Probe k for the two-point mass on {k-1, k}");
  experiment->add_option("--moments", o.moments, "Comma list of moment orders");

  auto* verify = app.add_subcommand("verify", "Cross-check fast paths against the oracles");
  Registered s_verify{verify, o};
  s_verify.trials("200");
  s_verify.seed();
  s_verify.output();

  std::vector<std::string> full;
  try {
    full = expand_config(args);
  } catch (const std::exception& e) {
    err << "Error: " << e.what() << '\n';
    return 2;
  }
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  for (const auto* reg : {&s_pq, &s_ldp, &s_exp, &s_verify}) reg->apply_defaults();
  if (gumbel->parsed() && o.x.empty()) o.x = "-1,0,1";

  try {
    mc::ResultTable table;
    int status = 0;

    if (sample->parsed()) {
      require(s_sample, "--t");
      require_positive("t", o.t);
      const auto trial = parse_count("trial", o.trial);
      const auto config =
          sample_poisson(o.d == 1 ? Window::unit_interval() : Window::unit_cube(o.d), o.t, seed_of(o), trial);
      std::ostringstream s;
      if (o.format == "json") {
        nlohmann::ordered_json doc;
        doc["config"] = {{"tool", "rgc-dim"}, {"version", mc::kToolVersion}, {"seed", config.meta().seed},
                         {"d", o.d}, {"t", o.t}, {"trial", trial}};
        auto pts = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < config.size(); ++i) {
          auto p = config.point(i);
          pts.push_back(std::vector<double>(p.begin(), p.end()));
        }
        doc["results"] = {{"n", config.size()}, {"points", pts}};
        s << doc.dump(2) << '\n';
      } else {
        s << "# rgc-dim v" << mc::kToolVersion << " seed=" << config.meta().seed << '\n';
        write_configuration(s, config);
      }
      emit(s.str(), o, out);
      return 0;
    }

    for (std::size_t g = 0; g < geometric.size(); ++g) {
      auto& reg = geometric[g];
      if (!reg.app->parsed()) continue;
      const ComplexKind kind = parse_complex(o.complex);
      const Loaded L = load_points(reg);
      table.seed = L.seed;
      table.config.emplace_back("command", reg.app->get_name());
      table.config.insert(table.config.end(), L.echo.begin(), L.echo.end());
      table.config.emplace_back("complex", std::string(complexes::to_string(kind)));
      const std::optional<double> t = L.t > 0.0 ? std::optional<double>(L.t) : std::nullopt;
      if (reg.app == dim) {
        table.add(row(t, L.rho, L.r, "points", static_cast<double>(L.points.size()), std::nullopt, 1, L.seed));
        table.add(row(t, L.rho, L.r, "dimension", complexes::dimension(L.points, L.r, kind), std::nullopt, 1,
                      L.seed));
      } else {
        table.config.emplace_back("n_max", std::to_string(o.n_max));
        const auto f = complexes::f_vector(L.points, L.r, kind, o.n_max);
        for (std::size_t n = 0; n < f.size(); ++n)
          table.add(row(t, L.rho, L.r, "f_" + std::to_string(n), static_cast<double>(f[n]), std::nullopt, 1,
                        L.seed));
      }
    }

    if (predict->parsed()) {
      require(s_predict, "--t");
      require(s_predict, "--rho");
      an::RegimeSpec spec{o.d, o.t, o.rho, parse_regime(o.regime), std::nullopt};
      if (s_predict.given("--B")) spec.B = o.B;
      std::optional<std::vector<double>> mu;
      if (!o.mu.empty()) {
        std::vector<double> table_mu{1.0};
        for (double v : parse_reals("mu", o.mu)) table_mu.push_back(v);
        mu = table_mu;
      }
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("regime: ") + e.what());
      }
      const auto p = an::predict_dimension(spec, mu);
      table.config = {{"command", "predict"}, {"regime", std::string(an::to_string(spec.regime))},
                      {"d", std::to_string(o.d)}, {"t", fmt(o.t)}, {"rho", fmt(o.rho)}};
      if (spec.B) table.config.emplace_back("B", fmt(*spec.B));
      if (!o.mu.empty()) table.config.emplace_back("mu", o.mu);
      const double r = spec.r();
      table.add(row(o.t, o.rho, r, "prediction", p.value, std::nullopt, 0, 0));
      if (p.k) table.add(row(o.t, o.rho, r, "k", *p.k, std::nullopt, 0, 0));
      if (p.lambda) table.add(row(o.t, o.rho, r, "expected_f_k", *p.lambda, std::nullopt, 0, 0));
      if (p.beta) table.add(row(o.t, o.rho, r, "beta", *p.beta, std::nullopt, 0, 0));
    }

    if (pq->parsed()) {
      require(s_pq, "--rho");
      require_positive("rho", o.rho);
      const auto ks = parse_k_list("k", o.k);
      const auto trials = trials_of(o);
      const auto seed = seed_of(o);
      table.seed = seed;
      table.config = {{"command", "pq"}, {"rho", fmt(o.rho)}, {"k", o.k}, {"trials", std::to_string(trials)}};
      const auto sims = mc::mc_pq(o.rho, ks, trials, seed, o.threads);
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const long long k = ks[i];
        const double p = an::pk_exact(o.rho, k);
        const auto& s = sims[i];
        const std::string tag = "_k" + std::to_string(k);
        table.add(row(std::nullopt, o.rho, std::nullopt, "p_exact" + tag, p, std::nullopt, trials, seed));
        table.add(row(std::nullopt, o.rho, std::nullopt, "p_hat" + tag, s.p_hat, s.p_se, trials, seed));
        const bool p_ok = std::abs(s.p_hat - p) < 3.0 * s.p_se || (s.p_se == 0.0 && s.p_hat == p);
        table.notes.push_back(std::string(p_ok ? "PASS" : "FAIL") + " k=" + std::to_string(k) +
                              " |p_hat - p_exact| < 3 SE");
        if (k >= 1) {
          const double q = an::qk_upper(o.rho, k);
          table.add(row(std::nullopt, o.rho, std::nullopt, "q_upper" + tag, q, std::nullopt, trials, seed));
          table.add(row(std::nullopt, o.rho, std::nullopt, "q_hat" + tag, s.q_hat, s.q_se, trials, seed));
          const bool q_ok = s.q_hat <= q + 3.0 * s.q_se;
          table.notes.push_back(std::string(q_ok ? "PASS" : "FAIL") + " k=" + std::to_string(k) +
                                " q_hat <= q_upper + 3 SE");
        }
      }
    }

    if (gumbel->parsed()) {
      require(s_gumbel, "--t");
      require_positive("t", o.t);
      const double rho = s_gumbel.given("--rho") ? o.rho : std::pow(std::log(o.t), 2.0);
      require_positive("rho", rho);
      if (!(o.t > rho)) throw UsageError("t: must exceed rho");
      const double r = rho / o.t;
      table.config = {{"command", "gumbel"}, {"t", fmt(o.t)}, {"rho", fmt(rho)}, {"x", o.x}};
      const auto g = an::gumbel_constants(o.t, rho);
      table.add(row(o.t, rho, r, "a_t", g.a, std::nullopt, 0, 0));
      table.add(row(o.t, rho, r, "b_t", g.b, std::nullopt, 0, 0));
      for (double x : parse_reals("x", o.x)) {
        const std::string tag = "@x=" + fmt(x);
        table.add(row(o.t, rho, r, "k_t" + tag, g.a + x * g.b, std::nullopt, 0, 0));
        table.add(row(o.t, rho, r, "k_rounded" + tag, std::round(g.a + x * g.b), std::nullopt, 0, 0));
        table.add(row(o.t, rho, r, "eps_t" + tag, an::epsilon_t(o.t, rho, x), std::nullopt, 0, 0));
      }
    }

    if (ldp->parsed()) {
      const an::Regime regime = parse_regime(o.regime);
      if (regime == an::Regime::power_sparse) throw UsageError("regime: no rate function for power_sparse");
      std::optional<double> B;
      if (s_ldp.given("--B")) {
        require_positive("B", o.B);
        B = o.B;
      }
      if (regime == an::Regime::critical && !B) throw UsageError("B: required for the critical regime");
      table.config = {{"command", "ldp"}, {"regime", std::string(an::to_string(regime))}};
      if (B) table.config.emplace_back("B", fmt(*B));
      if (!o.x.empty()) {
        table.config.emplace_back("x", o.x);
        for (double x : parse_reals("x", o.x))
          table.add(row(std::nullopt, std::nullopt, std::nullopt, "I@x=" + fmt(x), an::ldp_rate(regime, x, B),
                        std::nullopt, 0, 0));
      }
      if (!o.t_values.empty()) {
        require(s_ldp, "--a");
        if (o.rho_rule.empty()) throw UsageError("rho-rule: required with --t-values");
        mc::ExperimentConfig cfg;
        cfg.window = o.d == 1 ? Window::unit_interval() : Window::unit_cube(o.d);
        cfg.complex = parse_complex(o.complex);
        cfg.t_values = parse_reals("t-values", o.t_values);
        try {
          cfg.rho_rule = mc::RhoRule::parse(o.rho_rule);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        cfg.trials = trials_of(o);
        cfg.master_seed = seed_of(o);
        cfg.regime = regime;
        cfg.threads = o.threads;
        try {
          cfg.validate();
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        table.seed = cfg.master_seed;
        table.config.insert(table.config.end(),
                            {{"d", std::to_string(o.d)}, {"complex", std::string(complexes::to_string(cfg.complex))},
                             {"t_values", o.t_values}, {"rho_rule", cfg.rho_rule.describe()},
                             {"trials", std::to_string(cfg.trials)}, {"a", fmt(o.a)}});
        for (const auto& e : mc::estimate_ldp_rate(cfg, o.a)) {
          const double r = cfg.r(e.t);
          const auto tr = cfg.trials;
          table.add(row(e.t, e.rho, r, "n_t", e.n_t, std::nullopt, tr, cfg.master_seed));
          table.add(row(e.t, e.rho, r, "m_t", e.m_t, std::nullopt, tr, cfg.master_seed));
          table.add(row(e.t, e.rho, r, "p_hat", e.p_hat, std::nullopt, tr, cfg.master_seed));
          table.add(row(e.t, e.rho, r, e.floored ? "rate_floor" : "rate_estimate", e.value, e.standard_error, tr,
                        cfg.master_seed));
        }
        table.add(row(std::nullopt, std::nullopt, std::nullopt, "I@a=" + fmt(o.a), an::ldp_rate(regime, o.a, B),
                      std::nullopt, 0, 0));
      }
    }

    if (experiment->parsed()) {
      mc::ExperimentConfig cfg;
      cfg.window = o.d == 1 ? Window::unit_interval() : Window::unit_cube(o.d);
      cfg.complex = parse_complex(o.complex);
      cfg.t_values = parse_reals("t-values", o.t_values);
      try {
        cfg.rho_rule = mc::RhoRule::parse(o.rho_rule);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      cfg.trials = trials_of(o);
      cfg.master_seed = seed_of(o);
      cfg.threads = o.threads;
      if (!o.k.empty()) {
        const auto ks = parse_k_list("k", o.k);
        if (ks.size() != 1) throw UsageError("k: expected a single probe value");
        cfg.k_probe = static_cast<unsigned>(ks.front());
      }
      cfg.moments.clear();
      for (long long m : parse_k_list("moments", o.moments)) cfg.moments.push_back(static_cast<unsigned>(m));
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      table.seed = cfg.master_seed;
      table.config = {{"command", "experiment"},
                      {"d", std::to_string(o.d)},
                      {"complex", std::string(complexes::to_string(cfg.complex))},
                      {"t_values", o.t_values},
                      {"rho_rule", cfg.rho_rule.describe()},
                      {"trials", std::to_string(cfg.trials)},
                      {"moments", o.moments}};
      if (cfg.k_probe) table.config.emplace_back("k", std::to_string(*cfg.k_probe));
      for (const auto& summary : mc::run_dimension_experiment(cfg))
        for (auto& r : mc::to_rows(summary, cfg.master_seed)) table.add(std::move(r));
    }

    if (verify->parsed()) {
      const auto instances = trials_of(o);
      const auto seed = seed_of(o);
      table.seed = seed;
      table.config = {{"command", "verify"}, {"instances", std::to_string(instances)}};
      for (const auto& c : verify_suite(instances, seed)) {
        table.add(row(std::nullopt, std::nullopt, std::nullopt, c.name + "_mismatches",
                      static_cast<double>(c.mismatches), std::nullopt, c.cases, seed));
        table.notes.push_back(std::string(c.mismatches == 0 ? "PASS " : "FAIL ") + c.name + " (" +
                              std::to_string(c.cases) + " cases)");
        if (c.mismatches) status = 1;
      }
    }

    emit(render(table, o.format), o, out);
    return status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rgc::cli
