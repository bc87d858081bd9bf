#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "reference.hpp"
#include "rgc/analytics.hpp"
#include "rgc/complexes.hpp"
#include "rgc/montecarlo.hpp"
#include "rgc/oracle.hpp"

namespace {

namespace an = rgc::analytics;
namespace ref = rgc::testing;
using an::Regime;
using rgc::complexes::ComplexKind;

constexpr double kInf = std::numeric_limits<double>::infinity();

void expect_rel(double actual, double expected, double tol) {
  EXPECT_NEAR(actual, expected, tol * std::abs(expected)) << "expected " << expected;
}

// ---------------------------------------------------------------------------
// Poisson machinery

TEST(Poisson, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(an::poisson_log_pmf(1.0, 0), -1.0);
  EXPECT_NEAR(an::poisson_pmf(2.0, 2), 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_EQ(an::poisson_pmf(3.0, -1), 0.0);
  EXPECT_EQ(an::poisson_log_pmf(3.0, -2), -kInf);
  EXPECT_EQ(an::poisson_cdf(3.0, -1), 0.0);
  EXPECT_EQ(an::poisson_sf(3.0, -1), 1.0);
}

TEST(Poisson, HighPrecisionReferenceValues) {
  expect_rel(an::poisson_cdf(500.0, 480), 0.1920615792809947287634905, 1e-12);
  expect_rel(an::poisson_sf(10.0, 20), 0.001588260661858048160301286, 1e-12);
  expect_rel(an::poisson_pmf(5.0, 5), 0.1754673697678507056415638, 1e-12);
}

TEST(Poisson, CdfMatchesDirectSummation) {
  expect_rel(an::poisson_cdf(500.0, 480), ref::ref_cdf(500.0, 480), 1e-12);
  for (double lambda : {0.3, 2.0, 17.5, 120.0})
    for (long long k = 0; k < static_cast<long long>(3 * lambda) + 10; ++k)
      ASSERT_NEAR(an::poisson_cdf(lambda, k), ref::ref_cdf(lambda, k), 1e-13) << lambda << " " << k;
}

TEST(Poisson, CdfAndSurvivalAreComplementary) {
  for (double lambda : {0.01, 1.0, 9.5, 80.0, 2500.0})
    for (long long k = 0; k < static_cast<long long>(2 * lambda) + 20; k += 1 + k / 10) {
      ASSERT_NEAR(an::poisson_cdf(lambda, k) + an::poisson_sf(lambda, k), 1.0, 1e-13);
      ASSERT_NEAR(std::exp(an::poisson_log_cdf(lambda, k)), an::poisson_cdf(lambda, k), 1e-13);
      ASSERT_NEAR(std::exp(an::poisson_log_sf(lambda, k)), an::poisson_sf(lambda, k), 1e-13);
    }
}

TEST(Poisson, DeepTailsStayFinite) {
  const double lsf = an::poisson_log_sf(5.0, 400);
  EXPECT_TRUE(std::isfinite(lsf));
  EXPECT_NEAR(lsf, ref::ref_log_pmf(5.0, 401), 0.02);
  const double lcdf = an::poisson_log_cdf(1e4, 8000);
  EXPECT_TRUE(std::isfinite(lcdf));
  EXPECT_LT(lcdf, -200.0);
}

TEST(Poisson, RejectsBadRate) {
  EXPECT_THROW(an::poisson_pmf(0.0, 1), std::invalid_argument);
  EXPECT_THROW(an::poisson_cdf(-1.0, 1), std::invalid_argument);
  EXPECT_THROW(an::poisson_sf(kInf, 1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Bound suites

TEST(Chernoff, Examples) {
  EXPECT_NEAR(an::chernoff_upper(1.0, 1), 1.0, 1e-15);
  EXPECT_GE(an::chernoff_upper(10.0, 20), an::poisson_sf(10.0, 19));
  for (double lambda : {0.1, 3.0, 40.0}) EXPECT_NEAR(an::chernoff_lower(lambda, 0), an::poisson_cdf(lambda, 0), 1e-15);
  EXPECT_THROW(an::chernoff_upper(10.0, 5), std::invalid_argument);
  EXPECT_THROW(an::chernoff_lower(10.0, 11), std::invalid_argument);
  EXPECT_THROW(an::chernoff_lower(10.0, -1), std::invalid_argument);
}

TEST(Chernoff, DominatesExactTailsOnGrid) {
  for (double lambda : {0.1, 0.5, 1.0, 2.5, 10.0, 33.3, 100.0, 1000.0}) {
    const auto top = static_cast<long long>(3 * lambda + 30);
    for (long long k = 0; k <= top; ++k) {
      const double kk = static_cast<double>(k);
      if (kk >= lambda) ASSERT_GE(an::chernoff_upper(lambda, k), ref::ref_tail_ge(lambda, k)) << lambda << " " << k;
      if (kk <= lambda) ASSERT_GE(an::chernoff_lower(lambda, k), ref::ref_cdf(lambda, k)) << lambda << " " << k;
    }
  }
}

TEST(PmfBounds, UnitArguments) {
  const auto b = an::poisson_pmf_bounds(1.0, 1);
  EXPECT_NEAR(b.lower, 1.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi)), 1e-15);
  EXPECT_NEAR(b.lower, 0.13298, 1e-5);
  EXPECT_NEAR(b.upper, std::exp(-1.0 / 13.0) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_LT(b.lower, std::exp(-1.0));
  EXPECT_GT(b.upper, std::exp(-1.0));
}

TEST(PmfBounds, BracketExactPmf) {
  const auto b = an::poisson_pmf_bounds(5.0, 5);
  EXPECT_LT(b.lower, 0.1754673697678507);
  EXPECT_GT(b.upper, 0.1754673697678507);
  for (double lambda : {0.5, 1.0, 5.0, 50.0})
    for (long long k = 1; k <= 200; ++k) {
      const auto s = an::poisson_pmf_bounds(lambda, k);
      const double exact = ref::ref_pmf(lambda, k);
      if (exact < std::numeric_limits<double>::min()) break;
      ASSERT_LT(s.lower, exact) << lambda << " " << k;
      ASSERT_GT(s.upper, exact) << lambda << " " << k;
    }
  EXPECT_THROW(an::poisson_pmf_bounds(1.0, 0), std::invalid_argument);
}

TEST(Stirling, BracketFactorials) {
  const auto one = an::stirling_bounds(1);
  EXPECT_NEAR(std::exp(one.lower), 0.99587, 1e-5);
  EXPECT_NEAR(std::exp(one.upper), 1.00227, 1e-5);
  EXPECT_LT(one.lower, 0.0);
  EXPECT_GT(one.upper, 0.0);
  const auto ten = an::stirling_bounds(10);
  EXPECT_LT(ten.lower, std::log(3628800.0));
  EXPECT_GT(ten.upper, std::log(3628800.0));
  const auto thousand = an::stirling_bounds(1000);
  EXPECT_LT(thousand.lower, 5912.128178488163348878131);
  EXPECT_GT(thousand.upper, 5912.128178488163348878131);
  double log_fact = 0.0;
  for (long long n = 1; n <= 170; ++n) {
    log_fact += std::log(static_cast<double>(n));
    const auto s = an::stirling_bounds(n);
    ASSERT_LT(s.lower, log_fact + 1e-13 * log_fact) << n;
    ASSERT_GT(s.upper, log_fact - 1e-13 * log_fact) << n;
  }
  EXPECT_THROW(an::stirling_bounds(0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// f-vector expectations

TEST(BallVolume, LowDimensions) {
  EXPECT_DOUBLE_EQ(an::unit_ball_volume(1), 2.0);
  EXPECT_NEAR(an::unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(an::unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_THROW(an::unit_ball_volume(0), std::invalid_argument);
}

TEST(ExpectedFaces, Formula) {
  EXPECT_EQ(an::expected_f_n(123.0, 4.0, 0, 99.0), 123.0);
  for (int d = 1; d <= 4; ++d) {
    const double kappa = an::unit_ball_volume(d);
    EXPECT_NEAR(an::expected_f_n(500.0, 0.3, 1, kappa), kappa / 2.0 * 500.0 * 0.3, 1e-10);
  }
  EXPECT_NEAR(an::expected_f_n(200.0, 0.5, 2, 3.0), 3.0 / 6.0 * 200.0 * 0.25, 1e-12);
  EXPECT_THROW(an::expected_f_n(1.0, 1.0, 2, 0.0), std::invalid_argument);
}

TEST(MuEstimate, EdgeIntegralIsBallVolume) {
  for (int d = 1; d <= 4; ++d) {
    const auto est = an::mu_n_estimate(d, 1, ComplexKind::vietoris_rips, 2000, 3);
    EXPECT_NEAR(est.value, an::unit_ball_volume(d), 1e-12);
  }
}

TEST(MuEstimate, AgreesWithQuadratureOnTheLine) {
  for (unsigned n = 2; n <= 3; ++n)
    for (auto kind : {ComplexKind::vietoris_rips, ComplexKind::cech}) {
      const auto est = an::mu_n_estimate(1, n, kind, 200000, 7);
      const double exact = rgc::oracle::quadrature_mu_n(1, n, kind);
      EXPECT_NEAR(est.value, exact, 3.0 * est.standard_error) << n;
    }
}

TEST(MuEstimate, CechIsStrictlySmallerInThePlane) {
  const auto vr = an::mu_n_estimate(2, 2, ComplexKind::vietoris_rips, 100000, 11);
  const auto cech = an::mu_n_estimate(2, 2, ComplexKind::cech, 100000, 11);
  EXPECT_LT(cech.value, vr.value);
  EXPECT_THROW(an::mu_n_estimate(1, 0, ComplexKind::cech, 10, 1), std::invalid_argument);
}

TEST(ExpectedFaces, TrianglesOnTheLineMatchSimulation) {
  const double t = 200.0, rho = 0.5;
  const double r = rho / t;
  const auto mu2 = an::mu_n_estimate(1, 2, ComplexKind::vietoris_rips, 400000, 13);
  const double predicted = an::expected_f_n(t, rho, 2, mu2.value);
  const std::uint64_t trials = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto cfg = rgc::sample_poisson(rgc::Window::unit_interval(), t, 17, i);
    const double f2 = static_cast<double>(rgc::complexes::f_vector(cfg, r, ComplexKind::vietoris_rips, 2)[2]);
    sum += f2;
    sum2 += f2 * f2;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  const double pred_se = an::expected_f_n(t, rho, 2, mu2.standard_error);
  EXPECT_NEAR(mean, predicted, 5.0 * std::hypot(se, pred_se));
}

// ---------------------------------------------------------------------------
// Regime predictors and rate functions

TEST(SolveBeta, FixedPoints) {
  EXPECT_EQ(an::solve_beta(0.0), 1.0);
  EXPECT_NEAR(an::solve_beta(1.0), std::numbers::e, 1e-12);
  const double b2 = an::solve_beta(2.0);
  EXPECT_NEAR(b2, 3.591121476668622136649223, 1e-12);
  EXPECT_LT(std::abs(b2 * std::log(b2) - b2 + 1.0 - 2.0), 1e-12);
  EXPECT_THROW(an::solve_beta(-0.1), std::invalid_argument);
}

TEST(SolveBeta, InvertsTheDefiningFunction) {
  double prev = 1.0;
  for (double beta = 1.0; beta <= 50.0; beta += 0.25) {
    const double c = beta * std::log(beta) - beta + 1.0;
    const double solved = an::solve_beta(c);
    ASSERT_NEAR(solved, beta, 1e-12 * beta) << beta;
    ASSERT_LT(std::abs(solved * std::log(solved) - solved + 1.0 - c), 1e-12 * std::max(1.0, c));
    ASSERT_GE(solved, prev);
    prev = solved;
  }
}

TEST(Predict, DenseRegimeIsHalfBallMass) {
  const an::RegimeSpec spec{1, 1e4, 400.0, Regime::dense, std::nullopt};
  EXPECT_NEAR(an::predict_dimension(spec).value, 400.0, 1e-12);
  const an::RegimeSpec plane{2, 1e6, 400.0, Regime::dense, std::nullopt};
  EXPECT_NEAR(an::predict_dimension(plane).value, std::numbers::pi / 4.0 * 400.0, 1e-9);
}

TEST(Predict, CriticalRegimeUsesBeta) {
  const an::RegimeSpec spec{1, 1e6, 30.0, Regime::critical, 1.0};
  const auto p = an::predict_dimension(spec);
  ASSERT_TRUE(p.beta.has_value());
  EXPECT_NEAR(*p.beta, std::numbers::e, 1e-12);
  EXPECT_NEAR(p.value, std::numbers::e * 30.0, 1e-10);
  EXPECT_THROW(an::predict_dimension({1, 1e6, 30.0, Regime::critical, std::nullopt}), std::invalid_argument);
}

TEST(Predict, IntermediateRegimeFormula) {
  const auto p = an::predict_dimension({1, 1e6, 1.0, Regime::intermediate, std::nullopt});
  const double lt = 6.0 * std::log(10.0);
  EXPECT_NEAR(p.value, lt / std::log(lt), 1e-12);
  EXPECT_NEAR(p.value, 5.262, 1e-3);
  EXPECT_THROW(an::predict_dimension({1, 1e6, 20.0, Regime::intermediate, std::nullopt}), std::invalid_argument);
}

TEST(Predict, PowerSparseRegimeFindsBoundedFaceCount) {
  const auto p = an::predict_dimension({1, 1e4, 1e-4, Regime::power_sparse, std::nullopt});
  ASSERT_TRUE(p.k.has_value());
  EXPECT_EQ(*p.k, 1u);
  EXPECT_NEAR(*p.lambda, 1.0, 1e-12);
  const auto q = an::predict_dimension({1, 1e6, 1e-2, Regime::power_sparse, std::nullopt});
  // E f_2 = 3/6 * 1e6 * 1e-4 = 50, E f_3 = 4/24 * 1e6 * 1e-6 = 1/6.
  EXPECT_EQ(*q.k, 3u);
  EXPECT_NEAR(*q.lambda, 1.0 / 6.0, 1e-12);
  EXPECT_THROW(an::predict_dimension({2, 1e6, 1e-2, Regime::power_sparse, std::nullopt}), std::invalid_argument);
  const auto r = an::predict_dimension({2, 1e6, 1e-2, Regime::power_sparse, std::nullopt},
                                       std::vector<double>{1.0, std::numbers::pi, 4.0, 3.0});
  EXPECT_EQ(*r.k, 3u);
}

TEST(Predict, SpecValidation) {
  EXPECT_THROW(an::predict_dimension({1, 10.0, 20.0, Regime::dense, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(an::predict_dimension({0, 10.0, 2.0, Regime::dense, std::nullopt}), std::invalid_argument);
  EXPECT_EQ(an::regime_from_string("iv"), Regime::dense);
  EXPECT_EQ(an::regime_from_string("critical"), Regime::critical);
  EXPECT_THROW(an::regime_from_string("sparse"), std::invalid_argument);
}

TEST(Ldp, RateFixedPoints) {
  EXPECT_EQ(an::ldp_rate(Regime::dense, 1.0), 0.0);
  EXPECT_NEAR(an::ldp_rate(Regime::dense, 2.0), 2.0 * std::log(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(an::ldp_rate(Regime::dense, 1.2), 0.01878587, 1e-8);
  EXPECT_EQ(an::ldp_rate(Regime::intermediate, 2.0), 1.0);
  EXPECT_EQ(an::ldp_rate(Regime::intermediate, 1.0), 0.0);
  EXPECT_EQ(an::ldp_rate(Regime::dense, 0.99), kInf);
  EXPECT_EQ(an::ldp_rate(Regime::intermediate, 0.5), kInf);
  for (double B : {0.25, 1.0, 3.0}) {
    const double beta = an::solve_beta(1.0 / B);
    EXPECT_NEAR(an::ldp_rate(Regime::critical, beta, B), 0.0, 1e-12);
    EXPECT_EQ(an::ldp_rate(Regime::critical, beta * (1 - 1e-9), B), kInf);
    EXPECT_GT(an::ldp_rate(Regime::critical, beta * 1.1, B), 0.0);
  }
  EXPECT_THROW(an::ldp_rate(Regime::critical, 2.0), std::invalid_argument);
  EXPECT_THROW(an::ldp_rate(Regime::power_sparse, 2.0), std::invalid_argument);
}

TEST(Ldp, RatesAreConvexAndIncreasingRightOfTheMinimum) {
  for (auto regime : {Regime::dense, Regime::intermediate}) {
    double prev = -1.0, prev_step = -1.0;
    for (double x = 1.0; x < 6.0; x += 0.05) {
      const double v = an::ldp_rate(regime, x);
      if (prev >= 0.0) {
        ASSERT_GT(v, prev);
        ASSERT_GE(v - prev, prev_step - 1e-12);
        prev_step = v - prev;
      }
      prev = v;
    }
  }
}

TEST(Ldp, Scalings) {
  const auto dense = an::ldp_scaling(Regime::dense, 1e5, 300.0, 1);
  EXPECT_DOUBLE_EQ(dense.n_t, 300.0);
  EXPECT_DOUBLE_EQ(dense.m_t, 300.0);
  const auto plane = an::ldp_scaling(Regime::critical, 1e5, 300.0, 2);
  EXPECT_NEAR(plane.n_t, std::numbers::pi / 4.0 * 300.0, 1e-12);
  const auto inter = an::ldp_scaling(Regime::intermediate, 1e5, 2.0, 1);
  EXPECT_NEAR(inter.n_t, std::log(1e5) / std::log(1e5 / 2.0), 1e-14);
  EXPECT_NEAR(inter.m_t, std::log(1e5), 1e-14);
  EXPECT_THROW(an::ldp_scaling(Regime::power_sparse, 1e5, 2.0, 1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Gumbel constants

an::GumbelConstants gumbel_by_hand(double t, double rho) {
  const double L = std::log(t) - std::log(rho);
  const double a = rho + std::sqrt(2.0 * rho * L) *
                             (1.0 + std::log(L) / (4.0 * L) - 0.5 * std::log(std::numbers::pi) / (2.0 * L));
  return {a, std::sqrt(rho / 2.0 / L)};
}

TEST(Gumbel, ScaleAtUnitLogRatio) {
  for (double rho : {1.0, 7.0, 250.0}) {
    const auto g = an::gumbel_constants(std::numbers::e * rho, rho);
    EXPECT_NEAR(g.b, std::sqrt(rho / 2.0), 1e-12 * std::sqrt(rho));
  }
}

TEST(Gumbel, ReferenceValues) {
  const auto g = an::gumbel_constants(1e8, 1e4);
  expect_rel(g.a, 10441.72365666462228931002, 1e-12);
  expect_rel(g.b, 23.29953008923280376474156, 1e-12);
  const auto h = gumbel_by_hand(1e8, 1e4);
  expect_rel(g.a, h.a, 1e-12);
  expect_rel(g.b, h.b, 1e-12);
}

TEST(Gumbel, CentringExceedsRhoWhenNestedLogsArePositive) {
  for (double rho : {1.0, 10.0, 100.0, 1e4})
    for (double ratio : {16.0, 100.0, 1e4, 1e8}) {
      const auto g = an::gumbel_constants(rho * ratio, rho);
      ASSERT_GT(g.a, rho);
      const auto h = gumbel_by_hand(rho * ratio, rho);
      ASSERT_NEAR(g.a, h.a, 1e-12 * h.a);
    }
  EXPECT_THROW(an::gumbel_constants(5.0, 5.0), std::invalid_argument);
  EXPECT_THROW(an::gumbel_constants(5.0, 0.0), std::invalid_argument);
}

TEST(Gumbel, EpsilonDefinitionAndPositivity) {
  const auto g = an::gumbel_constants(1e6, 190.0);
  EXPECT_NEAR(an::epsilon_t(1e6, 190.0, 0.0), (g.a - 190.0) / 190.0, 1e-15);
  for (double t : {1e3, 1e4, 1e6, 1e9})
    for (double x = -3.0; x <= 3.0; x += 0.5) ASSERT_GT(an::epsilon_t(t, std::pow(std::log(t), 2), x), 0.0);
}

TEST(Gumbel, EpsilonSatisfiesTheExpansion) {
  // rho eps^2 / 2 - [L + ln(L)/2 - ln sqrt(pi) + x] along rho = ln^2 t.
  for (double x : {-1.0, 0.0, 1.0}) {
    double last = 0.0;
    for (double t : {1e4, 1e6, 1e8, 1e12, 1e16, 1e24}) {
      const double rho = std::pow(std::log(t), 2);
      const double eps = an::epsilon_t(t, rho, x);
      const double L = std::log(t / rho);
      last = rho * eps * eps / 2.0 - (L + 0.5 * std::log(L) - std::log(std::sqrt(std::numbers::pi)) + x);
      ASSERT_LT(std::abs(last), 0.08) << "x=" << x << " t=" << t;
    }
    EXPECT_LT(std::abs(last), 0.03) << "x=" << x;
  }
}

// ---------------------------------------------------------------------------
// Scan probabilities

TEST(PkExact, ClosedFormValues) {
  EXPECT_EQ(an::pk_exact(3.0, 0), 1.0);
  EXPECT_EQ(an::pk_exact(0.2, 0), 1.0);
  EXPECT_NEAR(an::pk_exact(std::log(2.0), 1), 0.75, 1e-12);
  for (double rho : {0.1, 1.0, 4.0}) EXPECT_NEAR(an::pk_exact(rho, 1), 1.0 - std::exp(-2.0 * rho), 1e-14);
}

TEST(PkExact, HighPrecisionReferenceValues) {
  expect_rel(an::pk_exact(5.0, 8), 0.3961887199854704482271173, 1e-12);
  expect_rel(an::pk_exact(2.0, 4), 0.3752332067954007388698408, 1e-12);
  expect_rel(an::pk_exact(10.0, 14), 0.4257260214100724844596811, 1e-12);
  expect_rel(an::pk_exact(5.0, 12), 0.03151105403653800000239692, 1e-11);
}

TEST(PkExact, MatchesBallotDoubleSum) {
  for (double rho : {0.5, 2.0, 5.0, 10.0, 25.0})
    for (long long k = 1; k <= static_cast<long long>(rho) + 15; ++k) {
      const double exact = an::pk_exact(rho, k);
      const double summed = ref::ref_pk_double_sum(rho, k);
      ASSERT_NEAR(exact, summed, 1e-12 + 1e-10 * summed) << rho << " " << k;
    }
}

TEST(PkExact, MonotoneInKAndRho) {
  for (double rho : {0.3, 2.0, 9.0, 60.0, 400.0}) {
    double prev = 1.0;
    for (long long k = 0; k <= static_cast<long long>(2 * rho) + 30; ++k) {
      const double p = an::pk_exact(rho, k);
      ASSERT_LE(p, prev + 1e-12) << rho << " " << k;
      ASSERT_GE(p, -1e-12);
      prev = p;
    }
  }
  for (long long k : {1LL, 5LL, 20LL, 80LL}) {
    double prev = 0.0;
    for (double rho = 0.25; rho <= 120.0; rho *= 1.1) {
      const double p = an::pk_exact(rho, k);
      ASSERT_GE(p, prev - 1e-12) << rho << " " << k;
      prev = p;
    }
  }
}

TEST(PkExact, SanityEnvelope) {
  for (double rho : {0.5, 3.0, 20.0, 150.0})
    for (long long k = 1; k <= static_cast<long long>(2 * rho) + 20; ++k) {
      // Either [0,1] already holds k points, or some arrival s in (1,2]
      // closes a window (s-1, s] holding k of them.
      const double env = std::min(1.0, ref::ref_tail_ge(rho, k) + rho * ref::ref_tail_ge(rho, k - 1));
      ASSERT_LE(an::pk_exact(rho, k), env + 1e-12) << rho << " " << k;
    }
}

TEST(QkUpper, SingleCellReducesToEmptySum) {
  for (double rho : {0.2, 1.0, 6.0}) {
    const double s = 1.0 - std::exp(-rho);
    EXPECT_NEAR(an::qk_upper(rho, 1), s * (1.0 + 2.0 * an::pk_exact(rho, 1)), 1e-14);
  }
  EXPECT_THROW(an::qk_upper(2.0, 0), std::invalid_argument);
}

TEST(QkUpper, RatioToPkDecaysLikeInverseRhoEpsSquared) {
  EXPECT_NEAR(an::qk_upper(5.0, 12) / an::pk_exact(5.0, 12), 0.26928522910557207, 1e-9);
  double prev = kInf;
  for (double rho : {5.0, 20.0, 80.0, 320.0, 1280.0, 5120.0}) {
    const auto k = static_cast<long long>(std::ceil(rho * (1.0 + std::pow(rho, -0.4))));
    const double eps = (static_cast<double>(k) - rho) / rho;
    const double ratio = an::qk_upper(rho, k) / an::pk_exact(rho, k);
    ASSERT_LT(ratio, prev) << rho;
    ASSERT_LT(ratio * rho * eps * eps, 2.0) << rho;
    prev = ratio;
  }
}

TEST(PkAsymptotic, ApproachesExactAlongShrinkingEpsilon) {
  double prev_gap = kInf;
  for (double rho : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const long long k = std::llround(rho * (1.0 + std::pow(rho, -0.4)));
    const double eps = (static_cast<double>(k) - rho) / rho;
    const double gap = std::abs(an::pk_exact(rho, k) / an::pk_asymptotic(rho, eps) - 1.0);
    ASSERT_LT(gap, prev_gap) << rho;
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 0.15);
}

TEST(PkAsymptotic, DecreasingInEpsilon) {
  const double rho = 1e3;
  double prev = kInf;
  for (double eps = std::sqrt(1.0 / rho) * 1.01; eps < 0.5; eps *= 1.05) {
    const double v = an::pk_asymptotic(rho, eps);
    ASSERT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(an::pk_asymptotic(10.0, 0.0), std::invalid_argument);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST(CorollaryCdf, ValuesAndLimits) {
  EXPECT_NEAR(an::corollary_cdf(0.0), 0.25 - 1.0 / (2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(an::corollary_cdf(6.0), 1.0, 1e-6);
  EXPECT_LT(std::abs(an::corollary_cdf(-8.0)), 1e-10);
  EXPECT_LT(std::abs(1.0 - an::corollary_cdf(8.0)), 1e-10);
  for (double x : {-2.0, -0.5, 1.5}) {
    const double P = normal_cdf(x);
    const double f = std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi);
    EXPECT_NEAR(an::corollary_cdf(x), P * P - f * f - x * P * f, 1e-14);
  }
  EXPECT_THROW(an::corollary_cdf(NAN), std::invalid_argument);
}

TEST(CorollaryCdf, MonotoneOnFineGrid) {
  double prev = an::corollary_cdf(-6.0);
  for (int i = 1; i <= 12000; ++i) {
    const double v = an::corollary_cdf(-6.0 + 1e-3 * i);
    ASSERT_GE(v, prev - 1e-15) << i;
    prev = v;
  }
}

TEST(ChenStein, Arithmetic) {
  EXPECT_EQ(an::chen_stein_bound(10, 0.0, 0.0), 0.0);
  EXPECT_NEAR(an::chen_stein_bound(1000, 1e-3, 1e-7), 3e-3 + 2e-4, 1e-15);
  EXPECT_THROW(an::chen_stein_bound(0, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(an::chen_stein_bound(5, 1.5, 0.1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Ballot identity

TEST(Ballot, Examples) {
  EXPECT_EQ(an::ballot_reach_probability(1, 1, 2), an::ExactRatio::make(1, 2));
  EXPECT_EQ(an::ballot_reach_probability(2, 2, 3), an::ExactRatio::make(2, 3));
  EXPECT_EQ(an::ballot_reach_probability(2, 2, 5), an::ExactRatio::make(0, 1));
  EXPECT_EQ(an::ballot_reach_probability(4, 1, 3), an::ExactRatio::make(1, 1));
  EXPECT_EQ(an::ballot_reach_probability(1, 4, 3), an::ExactRatio::make(1, 1));
}

TEST(Ballot, MatchesEnumerationExactly) {
  for (unsigned n = 0; n <= 12; ++n)
    for (unsigned m = 0; n + m <= 12; ++m)
      for (unsigned k = 0; k <= 13; ++k)
        ASSERT_EQ(an::ballot_reach_probability(n, m, k), rgc::oracle::enumerate_ballot(n, m, k))
            << n << " " << m << " " << k;
}

TEST(Binomial, ExactValuesAndOverflow) {
  EXPECT_EQ(an::binomial(0, 0), 1u);
  EXPECT_EQ(an::binomial(5, 7), 0u);
  EXPECT_EQ(an::binomial(10, 3), 120u);
  EXPECT_EQ(an::binomial(60, 30), 118264581564861424ULL);
  EXPECT_EQ(an::binomial(67, 33), 14226520737620288370ULL);
  EXPECT_THROW(an::binomial(68, 34), std::overflow_error);
  for (unsigned n = 1; n <= 40; ++n)
    for (unsigned k = 1; k < n; ++k) ASSERT_EQ(an::binomial(n, k), an::binomial(n - 1, k - 1) + an::binomial(n - 1, k));
}

TEST(ExactRatio, Reduces) {
  EXPECT_EQ(an::ExactRatio::make(6, 8), (an::ExactRatio{3, 4}));
  EXPECT_EQ(an::ExactRatio::make(0, 8), (an::ExactRatio{0, 1}));
  EXPECT_THROW(an::ExactRatio::make(1, 0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Tail bounds

TEST(TailBounds, LowerIsALogProbability) {
  for (double rho : {0.5, 5.0, 50.0, 500.0})
    for (long long k = 0; k < 3 * static_cast<long long>(rho) + 5; ++k)
      ASSERT_LE(an::lower_tail_log_bound(1e5, rho, 1, k), 0.0);
  EXPECT_LE(an::lower_tail_log_bound(1e5, 20.0, 2, 10), 0.0);
  EXPECT_THROW(an::lower_tail_log_bound(1e5, 20.0, 1, -1), std::invalid_argument);
}

TEST(TailBounds, UpperDecreasesInK) {
  const double mu_eps = 50.0 * 1.1;
  double prev = kInf;
  for (long long k = static_cast<long long>(mu_eps) + 1; k < 200; ++k) {
    const double v = an::upper_tail_log_bound(1e4, 50.0, 1, k, 0.1, 0.0);
    ASSERT_LT(v, prev) << k;
    prev = v;
  }
  EXPECT_THROW(an::upper_tail_log_bound(1e4, 50.0, 1, 55, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(an::upper_tail_log_bound(1e4, 50.0, 1, 80, 0.0, 0.0), std::invalid_argument);
}

TEST(TailBounds, DominateSimulatedTailFrequencies) {
  rgc::montecarlo::ExperimentConfig cfg;
  cfg.complex = ComplexKind::cech;
  cfg.t_values = {1e4};
  cfg.rho_rule = rgc::montecarlo::RhoRule::constant(50.0);
  cfg.trials = 10000;
  cfg.master_seed = 19;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto records = rgc::montecarlo::run_trials(cfg, 0);
  const double n = static_cast<double>(records.size());
  auto frequency = [&](auto pred) {
    double c = 0.0;
    for (const auto& rec : records) c += pred(rec.dimension) ? 1.0 : 0.0;
    const double p = c / n;
    return std::pair{p, std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n)};
  };
  const auto [below, below_se] = frequency([](int d) { return d < 35; });
  EXPECT_LE(below, std::exp(an::lower_tail_log_bound(1e4, 50.0, 1, 35)) + 3.0 * below_se);

  const double eps = 0.1;
  const double log_c = ref::scan_lemma_log_constant(1, eps, 50.0 / 1e4);
  for (long long i = 56; i <= 90; i += 2) {
    const auto [above, above_se] = frequency([i](int d) { return d >= i; });
    EXPECT_LE(above, std::exp(an::upper_tail_log_bound(1e4, 50.0, 1, i, eps, log_c)) + 3.0 * above_se) << i;
  }
}

}  // namespace
