#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "moodmkt/causality.hpp"
#include "moodmkt/oracle.hpp"
#include "moodmkt/synth.hpp"

using namespace moodmkt;

namespace {

double rss_of(const Matrix& x, const std::vector<double>& y) {
  const auto b = oracle::brute_force_ols(x, y);
  double s = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double e = y[r];
    for (std::size_t c = 0; c < x.cols(); ++c) e -= x(r, c) * b[c];
    s += e * e;
  }
  return s;
}

VarSpec causal_spec(std::uint64_t seed, double cross = 0.8) {
  VarSpec s;
  s.coeff = {VarSpec::Coeff{{{0.0, 0.0}, {cross, 0.5}}}};
  s.length = 500;
  s.seed = seed;
  return s;
}

AlignedPanel two_column_panel(const std::vector<double>& a, const std::vector<double>& b) {
  AlignedPanel p(Date(2014, 1, 1), a.size());
  p.add_column("sent", a, Provenance{ColumnSource::sentiment, {}});
  p.add_column("mkt", b, Provenance{ColumnSource::market, {}});
  return p;
}

void expect_rel(double a, double b, double tol) { EXPECT_LE(std::fabs(a - b), tol * std::max(std::fabs(b), 1e-300)) << a << " vs " << b; }

}  // namespace

TEST(AdfCriticalValues, AsymptotesAndOrdering) {
  const auto ct = adf_critical_values(Deterministic::constant_trend, 100000000);
  EXPECT_NEAR(ct[0], -3.95877, 1e-4);
  EXPECT_NEAR(ct[1], -3.41049, 1e-4);
  EXPECT_NEAR(ct[2], -3.12705, 1e-4);
  const auto c = adf_critical_values(Deterministic::constant, 100000000);
  EXPECT_NEAR(c[1], -2.86154, 1e-4);
  const auto none = adf_critical_values(Deterministic::none, 100000000);
  EXPECT_NEAR(none[1], -1.941, 1e-4);
  for (auto spec : {Deterministic::none, Deterministic::constant, Deterministic::constant_trend}) {
    for (std::size_t n : {20u, 50u, 104u, 500u}) {
      const auto cv = adf_critical_values(spec, n);
      EXPECT_LT(cv[0], cv[1]);
      EXPECT_LT(cv[1], cv[2]);
    }
  }
  // Small-sample values move further left.
  EXPECT_LT(adf_critical_values(Deterministic::constant_trend, 50)[1], ct[1]);
}

TEST(Adf, RandomWalkUsuallyNotRejected) {
  int kept = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = adf_test(simulate_random_walk(500, 1000 + seed), 0.05, Deterministic::constant_trend);
    kept += r.reject_unit_root ? 0 : 1;
  }
  EXPECT_GE(kept, 90);
}

TEST(Adf, StationaryAr1UsuallyRejected) {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = adf_test(simulate_ar1(500, 0.5, 1.0, 2000 + seed), 0.05, Deterministic::constant_trend);
    rejected += r.reject_unit_root ? 1 : 0;
  }
  EXPECT_GE(rejected, 90);
}

TEST(Adf, DecisionMatchesCriticalValue) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto y = seed % 2 ? simulate_random_walk(120, seed) : simulate_ar1(120, 0.7, 0, seed);
    for (double level : {0.01, 0.05, 0.10}) {
      const auto r = adf_test(y, level);
      EXPECT_EQ(r.reject_unit_root, r.t_stat < r.critical_value());
      EXPECT_EQ(r.level, level);
    }
  }
}

TEST(Adf, FixedLagZeroMatchesHandRegression) {
  const auto y = simulate_ar1(80, 0.6, 2.0, 17);
  const auto r = adf_test(y, 0.05, Deterministic::constant_trend, 0);
  EXPECT_EQ(r.lags_used, 0u);
  const std::size_t n = y.size() - 1;
  Matrix full(n, 3), reduced(n, 2);
  std::vector<double> dy(n);
  for (std::size_t t = 1; t < y.size(); ++t) {
    const std::size_t i = t - 1;
    dy[i] = y[t] - y[t - 1];
    full(i, 0) = reduced(i, 0) = 1.0;
    full(i, 1) = reduced(i, 1) = static_cast<double>(t);
    full(i, 2) = y[t - 1];
  }
  const auto b = oracle::brute_force_ols(full, dy);
  expect_rel(r.gamma_hat, b[2], 1e-8);
  // t^2 equals the single-restriction F statistic.
  const double rss1 = rss_of(full, dy), rss0 = rss_of(reduced, dy);
  const double t_abs = std::sqrt((rss0 - rss1) / (rss1 / static_cast<double>(n - 3)));
  expect_rel(std::fabs(r.t_stat), t_abs, 1e-7);
  EXPECT_LT(r.t_stat, 0);
  EXPECT_EQ(r.n_obs, n);
}

TEST(Adf, LagSelectionWithinBound) {
  const auto y = simulate_ar1(200, 0.5, 0, 4);
  const auto r = adf_test(y);
  EXPECT_LE(r.lags_used, schwert_max_lags(200));
  EXPECT_EQ(schwert_max_lags(100), 12u);
  EXPECT_EQ(schwert_max_lags(500), 17u);
  EXPECT_EQ(adf_test(y, 0.05, Deterministic::constant_trend, 3).lags_used <= 3, true);
}

TEST(Adf, Errors) {
  try {
    adf_test(std::vector<double>(50, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "ADF: zero variance");
  }
  EXPECT_THROW(adf_test(simulate_ar1(19, 0.5, 0, 1)), Error);
  EXPECT_THROW(adf_test(simulate_ar1(50, 0.5, 0, 1), 0.02), Error);
}

TEST(Granger, DetectsCausalDirection) {
  int forward = 0, backward = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = simulate_var(causal_spec(seed));
    forward += granger_test(s.y, s.x, 1).p_value < 0.01;
    backward += granger_test(s.x, s.y, 1).p_value < 0.05;
  }
  EXPECT_GE(forward, 95);
  EXPECT_LE(backward, 10);
}

TEST(Granger, NullCalibration) {
  int rejected = 0;
  const int seeds = 500;
  for (int seed = 0; seed < seeds; ++seed) {
    VarSpec spec;
    spec.coeff = {VarSpec::Coeff{{{0.3, 0.0}, {0.0, 0.4}}}};
    spec.seed = 9000 + static_cast<std::uint64_t>(seed);
    const auto s = simulate_var(spec);
    rejected += granger_test(s.y, s.x, 1).p_value < 0.05;
  }
  const double rate = static_cast<double>(rejected) / seeds;
  EXPECT_GE(rate, 0.02);
  EXPECT_LE(rate, 0.08);
}

TEST(Granger, MatchesBruteForceRss) {
  const auto s = simulate_var(causal_spec(3, 0.2));
  for (int p : {1, 2, 3}) {
    const auto g = granger_test(s.y, s.x, p);
    const std::size_t n = s.y.size(), rows = n - static_cast<std::size_t>(p);
    Matrix r0(rows, 1 + p), r1(rows, 1 + 2 * p);
    std::vector<double> y(rows);
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
      const std::size_t r = t - static_cast<std::size_t>(p);
      y[r] = s.y[t];
      r0(r, 0) = r1(r, 0) = 1;
      for (int i = 1; i <= p; ++i) {
        r0(r, i) = r1(r, i) = s.y[t - i];
        r1(r, p + i) = s.x[t - i];
      }
    }
    expect_rel(g.rss_restricted, rss_of(r0, y), 1e-9);
    expect_rel(g.rss_unrestricted, rss_of(r1, y), 1e-9);
    EXPECT_EQ(g.n_effective, rows);
    EXPECT_EQ(g.df_num, static_cast<std::size_t>(p));
    EXPECT_EQ(g.df_den, rows - 2 * static_cast<std::size_t>(p) - 1);
  }
}

TEST(Granger, StoredFieldsReproduceF) {
  const auto s = simulate_var(causal_spec(5, 0.3));
  for (int p : {1, 2, 3}) {
    const auto g = granger_test(s.y, s.x, p);
    EXPECT_GE(g.rss_restricted, g.rss_unrestricted);
    const double f = ((g.rss_restricted - g.rss_unrestricted) / static_cast<double>(g.df_num)) /
                     (g.rss_unrestricted / static_cast<double>(g.df_den));
    expect_rel(g.f_stat, f, 1e-10);
    expect_rel(g.p_value, oracle::numeric_sf(oracle::Distribution::f,
                                             {static_cast<double>(g.df_num), static_cast<double>(g.df_den)}, g.f_stat),
               1e-6);
  }
}

TEST(Granger, ScaleAndShiftInvariance) {
  const auto s = simulate_var(causal_spec(6, 0.25));
  const auto base = granger_test(s.y, s.x, 2);
  auto affine = [](std::vector<double> v, double a, double b) {
    for (auto& x : v) x = a * x + b;
    return v;
  };
  for (auto [a, b] : {std::pair{3.5, 0.0}, {0.01, 0.0}, {1.0, 250.0}, {2.0, -40.0}}) {
    const auto gx = granger_test(s.y, affine(s.x, a, b), 2);
    const auto gy = granger_test(affine(s.y, a, b), s.x, 2);
    expect_rel(gx.f_stat, base.f_stat, 1e-9);
    expect_rel(gy.f_stat, base.f_stat, 1e-9);
    expect_rel(gx.p_value, base.p_value, 1e-9);
    expect_rel(gy.p_value, base.p_value, 1e-9);
  }
}

TEST(Granger, LagOneFIsSquaredT) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = simulate_var(causal_spec(seed, 0.1));
    const auto g = granger_test(s.y, s.x, 1);
    ASSERT_EQ(g.added_t_stats.size(), 1u);
    expect_rel(g.f_stat, g.added_t_stats[0] * g.added_t_stats[0], 1e-9);
  }
}

TEST(Granger, CollinearCause) {
  // X_{t-1} = Y_{t-2}, which is already in the lag-2 design.
  const auto s = simulate_var(causal_spec(1));
  std::vector<double> x(s.y.size());
  for (std::size_t t = 1; t < x.size(); ++t) x[t] = s.y[t - 1];
  try {
    granger_test(s.y, x, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("collinear regressors"), std::string::npos) << e.what();
  }
}

TEST(Granger, InsufficientLength) {
  const std::vector<double> a{1, 3, 2, 5, 4, 6, 5, 8}, b{2, 1, 4, 3, 6, 5, 7, 9};
  EXPECT_NO_THROW(granger_test(a, b, 1));
  EXPECT_NO_THROW(granger_test(a, b, 2));
  EXPECT_THROW(granger_test(a, b, 3), Error);
  EXPECT_THROW(granger_test(a, b, 0), Error);
  EXPECT_THROW(granger_test(a, std::vector<double>(7, 1.0), 1), Error);
}

TEST(GrangerMatrix, SingleCellHasBothDirections) {
  const auto s = simulate_var(causal_spec(2));
  const auto m = granger_matrix(two_column_panel(s.y, s.x), {"sent"}, {"mkt"}, {1});
  ASSERT_EQ(m.cells.size(), 1u);
  const auto& c = m.cells[0];
  ASSERT_TRUE(c.twitter_to_bitcoin.result);
  ASSERT_TRUE(c.bitcoin_to_twitter.result);
  EXPECT_EQ(c.twitter_to_bitcoin.result->cause, "sent");
  EXPECT_EQ(c.twitter_to_bitcoin.result->effect, "mkt");
  EXPECT_EQ(c.bitcoin_to_twitter.result->cause, "mkt");
  // mkt (x) drives sent (y).
  EXPECT_LT(c.bitcoin_to_twitter.result->p_value, 0.01);
  EXPECT_EQ(m.stationarity.size(), 2u);
  EXPECT_FALSE(m.gate_overridden);
}

TEST(GrangerMatrix, DeterministicOrder) {
  GaussianStream g(8);
  AlignedPanel p(Date(2014, 1, 1), 150);
  for (const char* name : {"s1", "s2", "m1", "m2"}) {
    std::vector<double> v(150);
    for (auto& x : v) x = g.next();
    p.add_column(name, v, {});
  }
  const auto m = granger_matrix(p, {"s1", "s2"}, {"m1", "m2"}, {1, 2, 3});
  ASSERT_EQ(m.cells.size(), 12u);
  EXPECT_EQ(m.cells[0].sentiment, "s1");
  EXPECT_EQ(m.cells[0].market, "m1");
  EXPECT_EQ(m.cells[2].lag, 3);
  EXPECT_EQ(m.cells[3].market, "m2");
  EXPECT_EQ(m.cells[6].sentiment, "s2");
}

TEST(GrangerMatrix, StationarityGate) {
  const auto walk = simulate_random_walk(200, 12);
  const auto noise = simulate_ar1(200, 0.2, 0, 13);
  const auto panel = two_column_panel(noise, walk);
  try {
    granger_matrix(panel, {"sent"}, {"mkt"}, {1});
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("stationarity gate"), std::string::npos);
    EXPECT_NE(msg.find("mkt"), std::string::npos);
  }
  GrangerMatrixOptions opts;
  opts.override_stationarity = true;
  const auto m = granger_matrix(panel, {"sent"}, {"mkt"}, {1}, opts);
  EXPECT_TRUE(m.gate_overridden);
  EXPECT_FALSE(m.stationarity[1].passed());
}

TEST(GrangerMatrix, ErrorCellKept) {
  std::vector<double> a(40), b(40);
  GaussianStream g(1);
  for (auto& v : a) v = g.next();
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = i < 30 ? g.next() : 0.0;
  GrangerMatrixOptions opts;
  opts.override_stationarity = true;
  const auto m = granger_matrix(two_column_panel(a, b), {"sent"}, {"mkt"}, {1, 20}, opts);
  ASSERT_EQ(m.cells.size(), 2u);
  EXPECT_TRUE(m.cells[0].twitter_to_bitcoin.result);
  EXPECT_FALSE(m.cells[1].twitter_to_bitcoin.result);
  EXPECT_NE(m.cells[1].twitter_to_bitcoin.error.find("insufficient length"), std::string::npos);
}

TEST(GrangerMatrix, SyntheticVolumeDrivesUncertainty) {
  const auto study = synthesize_study();
  const Lexicon lex;
  const auto panel = align(aggregate_daily(filter_bots(study.tweets, lex), lex), study.market);
  const auto m = granger_matrix(panel, {std::string(kColUncertainty)}, {"volume_btc"}, {1, 2, 3});
  ASSERT_EQ(m.cells.size(), 3u);
  for (const auto& c : m.cells) {
    ASSERT_TRUE(c.bitcoin_to_twitter.result);
    EXPECT_LT(c.bitcoin_to_twitter.result->p_value, 0.01) << "lag " << c.lag;
    EXPECT_EQ(c.bitcoin_to_twitter.result->stars(), Stars::two);
  }
}

TEST(GrangerMatrix, SyntheticStationaryVarsPassAdf) {
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = simulate_var(causal_spec(300 + seed));
    passed += adf_test(s.x).reject_unit_root && adf_test(s.y).reject_unit_root;
  }
  EXPECT_GE(passed, 45);
}
