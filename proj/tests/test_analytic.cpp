#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "compnoma/analytic.hpp"
#include "oracles.hpp"

namespace compnoma {
namespace {

RateVector make_rates(std::initializer_list<double> ks) {
  RateVector v;
  int label = 0;
  for (double k : ks) v.push(k, label++);
  return v;
}

RateVector random_rates(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> log_k(std::log(0.05), std::log(20.0));
  RateVector v;
  for (int i = 0; i < n; ++i) v.push(std::exp(log_k(rng)), i);
  return regularize(v);
}

// Topology whose link variances (sigma_eps = 0, v = 3) are set directly.
Topology topology_with_variances(int n, double ccu_var, double ceu_var) {
  Topology t;
  t.bs_positions.assign(n, Point{});
  t.ccu_positions.assign(n, Point{});
  t.ceu_positions.assign(n, Point{});
  t.d_ccu = LinkTable<double>(n, n, std::pow(ccu_var, -1.0 / 3.0));
  t.d_ceu = LinkTable<double>(n, n, std::pow(ceu_var, -1.0 / 3.0));
  return t;
}

ScenarioConfig clean_config(int n, int m, double rho) {
  ScenarioConfig c;
  c.n_cells = n;
  c.m_comp = m;
  c.rho = rho;
  c.sigma_eps = 0.0;
  c.gamma = 0.0;
  return c;
}

TEST(Hypoexp, SingleRateIsExponential) {
  const RateVector v = make_rates({1.0});
  for (double x : {0.0, 0.3, 2.0, 10.0}) EXPECT_NEAR(hypoexp_pdf(v, x), std::exp(-x), 1e-15);
}

TEST(Hypoexp, TwoRatesMatchConvolution) {
  const RateVector v = make_rates({1.0, 2.0});
  for (double x : {0.01, 0.5, 1.0, 3.0, 12.0}) {
    const double oracle = static_cast<double>(oracle::convolution_pdf(1.0L, 2.0L, x));
    EXPECT_NEAR(hypoexp_pdf(v, x), oracle, 1e-12);
    EXPECT_NEAR(hypoexp_pdf(v, x), 2.0 * std::exp(-x) - 2.0 * std::exp(-2.0 * x), 1e-14);
  }
}

TEST(Hypoexp, DensityIsNonnegativeAndIntegratesToOne) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const RateVector v = random_rates(rng, 2 + trial % 8);
    const double kmin = *std::min_element(v.rates.begin(), v.rates.end());
    for (double x = 1e-6; x <= 50.0 / kmin; x *= 1.5) ASSERT_GE(hypoexp_pdf(v, x), -1e-12) << x;
    const long double area = oracle::integrate_half_line([&](long double x) { return hypoexp_pdf(v, static_cast<double>(x)); });
    EXPECT_NEAR(static_cast<double>(area), 1.0, 1e-9) << trial;
  }
}

TEST(Hypoexp, WeightsSumToOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = hypoexp_weights(random_rates(rng, 2 + trial % 11));
    long double s = 0.0L;
    for (long double x : w) s += x;
    ASSERT_NEAR(static_cast<double>(s), 1.0, 1e-10) << trial;
  }
}

TEST(Hypoexp, RejectsInvalidRates) {
  EXPECT_THROW(hypoexp_weights(make_rates({1.0, 1.0})), DomainError);
  EXPECT_THROW(hypoexp_weights(make_rates({1.0, -2.0})), DomainError);
  EXPECT_THROW(hypoexp_pdf(RateVector{}, 1.0), DomainError);
  EXPECT_THROW(hypoexp_pdf(make_rates({1.0}), -1.0), DomainError);
}

TEST(Hypoexp, RegularizationSeparatesCoincidentRates) {
  const RateVector v = regularize(make_rates({2.0, 2.0, 2.0, 2.0 * (1.0 + 3e-7)}));
  EXPECT_TRUE(rates_distinct(v));
  EXPECT_EQ(regularize(v).rates, v.rates);
  for (double k : v.rates) EXPECT_NEAR(k, 2.0, 2.0 * 1e-4);
  const RateVector w = make_rates({1.0, 3.0});
  EXPECT_EQ(regularize(w).rates, w.rates);
}

TEST(LogExpectation, SingleUnitRateMatchesMonteCarlo) {
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> expo(1.0);
  const int n = 10000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = std::log2(1.0 + expo(rng));
    s += y;
    s2 += y * y;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  const double closed = log_expectation(make_rates({1.0}), 1.0);
  EXPECT_NEAR(closed, -std::exp(1.0) * expi(-1.0) / std::numbers::ln2, 1e-14);
  EXPECT_NEAR(closed, 0.8603474, 1e-7);
  EXPECT_LT(std::abs(closed - mean), 4.0 * se);
}

TEST(LogExpectation, MatchesQuadratureForRandomRateSets) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> log_a(0.0, std::log(200.0));
  for (int trial = 0; trial < 20; ++trial) {
    const RateVector v = random_rates(rng, 1 + trial % 7);
    const double a = std::exp(log_a(rng));
    const long double quad = oracle::integrate_half_line([&](long double x) {
      return std::log2(x + a) * hypoexp_pdf(v, static_cast<double>(x));
    });
    EXPECT_NEAR(log_expectation(v, a), static_cast<double>(quad), 1e-6) << trial;
  }
}

TEST(LogExpectation, MonotoneInOffsetAndRates) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const RateVector v = random_rates(rng, 1 + trial % 6);
    double prev = -1e9;
    for (double a : {1.0, 1.5, 4.0, 30.0, 1e3}) {
      const double e = log_expectation(v, a);
      ASSERT_GT(e, prev);
      prev = e;
    }
    RateVector scaled = v;
    for (double& k : scaled.rates) k *= 1.7;
    ASSERT_LT(log_expectation(scaled, 2.0), log_expectation(v, 2.0));
  }
}

TEST(LogExpectation, LargeOffsetApproachesLog) {
  const RateVector v = make_rates({0.5, 1.0, 4.0});
  for (double a : {1e3, 1e5, 1e7}) EXPECT_NEAR(log_expectation(v, a), std::log2(a), 5.0 / a);
  EXPECT_EQ(log_expectation(RateVector{}, 8.0), 3.0);
  EXPECT_THROW(log_expectation(v, 0.5), DomainError);
}

TEST(Rates, CcuVectors) {
  const ScenarioConfig c = clean_config(4, 3, 10.0);
  const Topology t = topology_with_variances(4, 1.0, 1.0);
  const RatePair p = rates_ccu(t, c, 1);
  ASSERT_EQ(p.numerator.size(), 4u);
  ASSERT_EQ(p.denominator.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.numerator.rates[i], 1.0, 1e-12);
  EXPECT_NEAR(p.numerator.rates[3], 0.1, 1e-12);  // 1/(rho sigma) outside the cluster
  for (int label : p.denominator.labels) EXPECT_NE(label, 1);
  EXPECT_THROW(rates_ccu(t, c, 3), ConfigError);
}

TEST(Rates, CeuVectors) {
  const ScenarioConfig c = clean_config(4, 3, 10.0);
  const Topology t = topology_with_variances(4, 1.0, 0.5);
  const RatePair p = rates_ceu(t, c);
  ASSERT_EQ(p.numerator.size(), 4u);
  ASSERT_EQ(p.denominator.size(), 4u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.denominator.rates[i] / p.numerator.rates[i], 10.0, 1e-12);
  EXPECT_EQ(p.denominator.rates[3], p.numerator.rates[3]);
  EXPECT_NEAR(p.numerator.rates[0], 1.0 / (10.0 * 0.5), 1e-12);

  const ScenarioConfig full = clean_config(3, 3, 10.0);
  const RatePair q = rates_ceu(topology_with_variances(3, 1.0, 0.5), full);
  for (double m : q.denominator.rates) EXPECT_NEAR(m, 1.0 / (0.1 * 10.0 * 0.5), 1e-12);
}

TEST(Rates, ZeroVarianceLinksAreDropped) {
  ScenarioConfig c;  // floor policy, sigma_eps = 0.01
  const Topology t = build_topology(c, 1);
  const RatePair p = rates_ceu(t, c);
  int live = 0;
  for (int i = 0; i < t.n_cells(); ++i) live += link_variance(t.d_ceu(i, 0), c) > 0.0;
  EXPECT_EQ(static_cast<int>(p.numerator.size()), live);
  EXPECT_LT(live, 12);
}

TEST(Offsets, AreAtLeastOne) {
  const ScenarioConfig c;
  EXPECT_NEAR(ccu_offset(c, 12), c.rho * 12 * c.sigma_eps + c.rho * c.gamma + 1.0, 1e-12);
  EXPECT_NEAR(ceu_offset(c, 12), c.rho * 12 * c.sigma_eps + 1.0, 1e-12);
  EXPECT_GE(ccu_offset(clean_config(2, 2, 0.0), 2), 1.0);
}

// Monte Carlo oracle built from the per-realization SINRs.
struct McEstimate {
  double mean;
  double se;
};

template <typename F>
McEstimate monte_carlo(const Topology& t, const ScenarioConfig& c, int n, F f) {
  const LinkVariances v = link_variances(t, c);
  double s = 0.0, s2 = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const double y = f(draw_channel(v, c.sigma_eps, fading_seed(c.master_seed, trial)));
    s += y;
    s2 += y * y;
  }
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

TEST(CcuExact, MatchesMonteCarloTwoCells) {
  ScenarioConfig c;
  c.n_cells = 2;
  c.m_comp = 2;
  const Topology t = build_topology(c, 3);
  for (int j = 0; j < 2; ++j) {
    const McEstimate mc = monte_carlo(t, c, 1000000, [&](const ChannelRealization& r) { return rate(sinr_ccu(r, j, c)); });
    EXPECT_LT(std::abs(ccu_exact(t, c, j) - mc.mean), 3.0 * mc.se) << j;
  }
}

TEST(CcuExact, MatchesMonteCarloTwelveCells) {
  const ScenarioConfig c;
  const Topology t = build_topology(c, c.master_seed);
  const McEstimate mc = monte_carlo(t, c, 1000000, [&](const ChannelRealization& r) { return rate(sinr_ccu(r, 2, c)); });
  EXPECT_LT(std::abs(ccu_exact(t, c, 2) - mc.mean), 3.0 * mc.se);
}

TEST(CcuExact, VanishesUnderHeavyResidualInterference) {
  ScenarioConfig c;
  const Topology t = build_topology(c, 1);
  c.gamma = 1e8;
  EXPECT_LT(ccu_exact(t, c, 0), 1e-5);
}

TEST(CeuExact, MatchesMonteCarloTwelveCells) {
  const ScenarioConfig c;
  const Topology t = build_topology(c, c.master_seed);
  const McEstimate mc = monte_carlo(t, c, 1000000, [&](const ChannelRealization& r) { return rate(sinr_comp_ceu(r, c)); });
  EXPECT_LT(std::abs(ceu_exact(t, c) - mc.mean), 3.0 * mc.se);
}

TEST(CeuExact, ZeroPower) {
  ScenarioConfig c;
  c.rho = 0.0;
  EXPECT_EQ(ceu_exact(build_topology(c, 1), c), 0.0);
}

TEST(Exact, NonnegativeOverManyTopologies) {
  ScenarioConfig c;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    c.n_cells = 3 + static_cast<int>(seed % 10);
    const Topology t = build_topology(c, seed);
    for (int j = 0; j < c.m_comp; ++j) ASSERT_GE(ccu_exact(t, c, j), 0.0);
    ASSERT_GE(ceu_exact(t, c), 0.0);
  }
}

TEST(ErrorProbabilityExact, DegenerateCases) {
  ScenarioConfig c = clean_config(3, 3, 0.0);
  const Topology t = topology_with_variances(3, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(pe_cosm_exact(t, c), 0.5);
  EXPECT_DOUBLE_EQ(pe_noncosm_exact(t, c, 2), 0.5);
  c.rho = 2.0;  // mean SNR 2 on every link
  EXPECT_NEAR(pe_noncosm_exact(t, c, 2), 0.5 * (1.0 - std::sqrt(0.5)), 1e-15);
  EXPECT_NEAR(pe_cosm_exact(t, c), 0.5 * (1.0 - std::sqrt(0.5)), 1e-15);
  c.rho = 1e14;
  EXPECT_LT(pe_noncosm_exact(t, c, 2), 1e-13);
  EXPECT_THROW(pe_noncosm_exact(t, c, 1), ConfigError);
  EXPECT_THROW(pe_noncosm_exact(t, c, 3), ConfigError);
}

TEST(ErrorProbabilityExact, MatchesMonteCarloOfInstantaneousForms) {
  ScenarioConfig c;
  c.n_cells = 3;
  c.rho = 10.0;  // keeps Pe large enough for a meaningful check
  const Topology t = build_topology(c, 1);
  const LinkVariances v = link_variances(t, c);
  double cosm = 0.0, noncosm = 0.0;
  const int n = 10000000;
  for (int trial = 0; trial < n; ++trial) {
    const ChannelRealization r = draw_channel(v, c.sigma_eps, fading_seed(4, trial));
    cosm += inst_pe_cosm(c.rho * gain(r.h_ceu(0, 1)), c.rho * gain(r.h_ceu(1, 1)));
    noncosm += inst_pe_noncosm(c.rho * gain(r.h_ceu(2, 2)));
  }
  EXPECT_NEAR(pe_cosm_exact(t, c), cosm / n, 1e-3);
  EXPECT_NEAR(pe_noncosm_exact(t, c, 2), noncosm / n, 1e-3);
}

TEST(ErrorProbabilityExact, StaysInRange) {
  ScenarioConfig c;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    c.rho = std::pow(10.0, static_cast<double>(seed % 7) / 2.0);
    const Topology t = build_topology(c, seed);
    const double p1 = pe_cosm_exact(t, c);
    const double p2 = pe_noncosm_exact(t, c, 2);
    ASSERT_GE(p1, 0.0);
    ASSERT_LE(p1, 0.5);
    ASSERT_GE(p2, 0.0);
    ASSERT_LE(p2, 0.5);
  }
}

TEST(EscExact, Additivity) {
  ScenarioConfig c;
  c.m_comp = 5;
  const ExactCapacity e = esc_exact(build_topology(c, 9), c);
  EXPECT_EQ(e.ccu_exact.size(), 5u);
  EXPECT_EQ(e.sm_exact.size(), 4u);
  EXPECT_EQ(e.esc_exact, e.noma_part + e.sm_part);
  EXPECT_LE(e.sm_part, 2.0 + (c.m_comp - 2) * 1.0);
  EXPECT_EQ(e.a, ccu_offset(c, 12));
  EXPECT_EQ(e.b, ceu_offset(c, 12));
}

TEST(EscExact, PaperLiteralSumsDifferFromFullExpansion) {
  const ScenarioConfig c;
  const Topology t = build_topology(c, 1);
  const ExactCapacity full = esc_exact(t, c, SumMode::full);
  const ExactCapacity literal = esc_exact(t, c, SumMode::paper_literal);
  EXPECT_NE(full.ceu_exact, literal.ceu_exact);
  EXPECT_EQ(full.sm_part, literal.sm_part);
  // With M = N there is nothing to truncate.
  ScenarioConfig m_eq_n = c;
  m_eq_n.n_cells = 3;
  const Topology small = build_topology(m_eq_n, 1);
  EXPECT_EQ(esc_exact(small, m_eq_n, SumMode::full).esc_exact, esc_exact(small, m_eq_n, SumMode::paper_literal).esc_exact);
}

TEST(EscExact, SmTermsIndependentOfCellCount) {
  ScenarioConfig c;
  std::vector<double> sm;
  for (int n = 3; n <= 12; ++n) {
    c.n_cells = n;
    sm.push_back(esc_exact(build_topology(c, 4), c).sm_part);
  }
  for (double s : sm) EXPECT_EQ(s, sm.front());
}

}  // namespace
}  // namespace compnoma
