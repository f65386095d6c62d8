#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "moodmkt/correlation.hpp"
#include "moodmkt/distributions.hpp"
#include "moodmkt/ols.hpp"
#include "moodmkt/oracle.hpp"
#include "moodmkt/synth.hpp"

using namespace moodmkt;
using oracle::Distribution;

namespace {

Matrix random_design(std::size_t n, std::size_t k, std::uint64_t seed, bool intercept = true) {
  GaussianStream g(seed);
  Matrix x(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) x(r, c) = (intercept && c == 0) ? 1.0 : g.next() * static_cast<double>(c + 1);
  }
  return x;
}

std::vector<double> random_response(const Matrix& x, std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<double> y(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double v = g.next();
    for (std::size_t c = 0; c < x.cols(); ++c) v += 0.5 * static_cast<double>(c + 1) * x(r, c);
    y[r] = v;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST(Pearson, Examples) {
  EXPECT_DOUBLE_EQ(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
  // cov = (-1)(-1) + 0 + (1)(0) = 1; sxx = syy = 2
  EXPECT_DOUBLE_EQ(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5);
}

TEST(Pearson, Errors) {
  try {
    pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "pearson: zero variance");
  }
  EXPECT_THROW(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), Error);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Pearson, AffineAndSymmetric) {
  GaussianStream g(5);
  std::vector<double> x(50), y(50);
  for (auto& v : x) v = g.next();
  for (auto& v : y) v = g.next();
  for (double a : {3.0, -0.25, 1e6}) {
    std::vector<double> ax(50);
    for (std::size_t i = 0; i < 50; ++i) ax[i] = a * x[i] + 7;
    EXPECT_NEAR(pearson(x, ax), a > 0 ? 1.0 : -1.0, 1e-14);
  }
  EXPECT_NEAR(pearson(x, y), pearson(y, x), 1e-14);
}

TEST(Pearson, LargeOffsetStable) {
  std::vector<double> x{1e9 + 1, 1e9 + 2, 1e9 + 3}, y{1, 3, 2};
  EXPECT_NEAR(pearson(x, y), 0.5, 1e-12);
}

TEST(CorrelationSignificance, ZeroAndUnit) {
  const auto z = correlation_significance(0.0, 30);
  EXPECT_EQ(z.p_two_tailed, 1.0);
  EXPECT_EQ(z.stars, Stars::none);
  const auto one = correlation_significance(-1.0, 10);
  EXPECT_EQ(one.p_two_tailed, 0.0);
  EXPECT_EQ(one.stars, Stars::two);
  EXPECT_THROW(correlation_significance(1.2, 10), Error);
  EXPECT_THROW(correlation_significance(0.1, 2), Error);
}

TEST(CorrelationSignificance, AgainstQuadratureOracle) {
  for (double r : {-0.262, -0.194, -0.085, 0.3, 0.05, 0.6}) {
    for (std::size_t n : {10u, 30u, 104u, 500u}) {
      const auto res = correlation_significance(r, n);
      const double df = static_cast<double>(n - 2);
      const double t = r * std::sqrt(df / (1 - r * r));
      const double p = 2 * oracle::numeric_sf(Distribution::t, {df, 0}, std::fabs(t));
      EXPECT_NEAR(res.p_two_tailed, p, 1e-9) << r << " " << n;
      EXPECT_NEAR(res.t_stat, t, 1e-12);
    }
  }
}

TEST(CorrelationSignificance, StarsAtN104) {
  EXPECT_EQ(correlation_significance(-0.262, 104).stars, Stars::two);
  EXPECT_EQ(correlation_significance(-0.194, 104).stars, Stars::one);
  EXPECT_EQ(correlation_significance(-0.085, 104).stars, Stars::none);
  EXPECT_NEAR(correlation_significance(-0.262, 104).p_two_tailed, 0.007, 1e-3);
  EXPECT_NEAR(correlation_significance(-0.085, 104).p_two_tailed, 0.39, 5e-3);
}

TEST(Stars, Thresholds) {
  EXPECT_EQ(stars_for(0.0099), Stars::two);
  EXPECT_EQ(stars_for(0.01), Stars::one);
  EXPECT_EQ(stars_for(0.0499), Stars::one);
  EXPECT_EQ(stars_for(0.05), Stars::none);
  EXPECT_EQ(to_string(Stars::two), "**");
}

TEST(Ols, ExactFit) {
  Matrix x(6, 2);
  std::vector<double> y(6);
  for (std::size_t r = 0; r < 6; ++r) {
    x(r, 0) = 1;
    x(r, 1) = static_cast<double>(r) * 1.5;
    y[r] = 3 + 2 * x(r, 1);
  }
  const auto fit = ols(x, y);
  EXPECT_LE(fit.rss, 1e-18 * dot(y, y));
  EXPECT_NEAR(fit.coefficients[0], 3, 1e-12);
  EXPECT_NEAR(fit.coefficients[1], 2, 1e-12);
}

TEST(Ols, OrthogonalResponse) {
  // Centered regressor and a response orthogonal to it.
  Matrix x = Matrix::from_columns({{1, 1, 1, 1}, {-1, 1, -1, 1}});
  std::vector<double> y{5, 5, 7, 7};
  const auto fit = ols(x, y);
  EXPECT_NEAR(fit.coefficients[1], 0, 1e-14);
  EXPECT_NEAR(fit.coefficients[0], 6, 1e-14);
}

TEST(Ols, MatchesBruteForce) {
  const auto x = random_design(50, 3, 1);
  const auto y = random_response(x, 2);
  const auto fit = ols(x, y);
  const auto ref = oracle::brute_force_ols(x, y);
  for (std::size_t j = 0; j < 3; ++j)
    EXPECT_NEAR(fit.coefficients[j], ref[j], 1e-8 * std::max(1.0, std::fabs(ref[j])));
}

TEST(Ols, InvariantsOnRandomSystems) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 20 + seed * 7, k = 1 + seed % 6;
    const auto x = random_design(n, k, seed * 3 + 1);
    const auto y = random_response(x, seed * 3 + 2);
    const auto fit = ols(x, y);
    EXPECT_NEAR(fit.rss, dot(fit.residuals, fit.residuals), 1e-10 * std::max(1.0, fit.rss));
    for (std::size_t c = 0; c < k; ++c) {
      const auto col = x.column(c);
      EXPECT_LE(std::fabs(dot(col, fit.residuals)),
                1e-8 * std::sqrt(dot(col, col)) * std::sqrt(dot(fit.residuals, fit.residuals)) + 1e-12);
    }
    EXPECT_EQ(fit.n_obs, n);
    EXPECT_EQ(fit.n_params, k);
  }
}

TEST(Ols, NestingMonotone) {
  const auto big = random_design(60, 6, 9);
  const auto y = random_response(big, 10);
  double prev = INFINITY;
  for (std::size_t k = 1; k <= 6; ++k) {
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < k; ++c) cols.push_back(big.column(c));
    const auto fit = ols(Matrix::from_columns(cols), y);
    EXPECT_LE(fit.rss, prev * (1 + 1e-12));
    prev = fit.rss;
  }
}

TEST(Ols, StandardErrorsMatchClosedForm) {
  // Simple regression: se(slope) = sqrt(s^2 / Sxx).
  const std::vector<double> xs{1, 2, 4, 5, 7, 8}, y{2.1, 3.9, 8.2, 9.8, 14.1, 16.3};
  const auto fit = ols(Matrix::from_columns({std::vector<double>(6, 1.0), xs}), y);
  double mx = 0;
  for (double v : xs) mx += v / 6;
  double sxx = 0;
  for (double v : xs) sxx += (v - mx) * (v - mx);
  EXPECT_NEAR(fit.std_errors[1], std::sqrt(fit.rss / 4 / sxx), 1e-12);
}

TEST(Ols, CollinearNamesColumn) {
  Matrix x(10, 3);
  for (std::size_t r = 0; r < 10; ++r) {
    x(r, 0) = 1;
    x(r, 1) = static_cast<double>(r);
    x(r, 2) = 2.0 * static_cast<double>(r) + 1;
  }
  try {
    ols(x, std::vector<double>(10, 1.0));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("collinear regressors"), std::string::npos) << msg;
    EXPECT_NE(msg.find("design column 2 "), std::string::npos) << msg;
  }
  Matrix z(5, 2);
  for (std::size_t r = 0; r < 5; ++r) z(r, 0) = 1;
  EXPECT_THROW(ols(z, std::vector<double>(5, 1.0)), Error);
}

TEST(Ols, NeedsMoreRowsThanColumns) {
  EXPECT_THROW(ols(random_design(3, 3, 1), std::vector<double>(3, 1.0)), Error);
  EXPECT_THROW(ols(random_design(5, 2, 1), std::vector<double>(4, 1.0)), Error);
}

TEST(TDistribution, Basics) {
  EXPECT_EQ(student_t_cdf(0, 7), 0.5);
  for (double t : {0.1, 0.7, 1.5, 3.0, 12.0}) {
    for (double df : {1.0, 2.5, 10.0, 100.0}) EXPECT_NEAR(student_t_cdf(t, df) + student_t_cdf(-t, df), 1.0, 1e-14);
  }
  double prev = 0;
  for (double t = -10; t <= 10; t += 0.25) {
    const double c = student_t_cdf(t, 3);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(TDistribution, NearNormalAtHighDf) {
  // Standard normal CDF at 1.96 is 0.9750021.
  EXPECT_NEAR(student_t_cdf(1.96, 1000), 0.9750021, 5e-4);
  EXPECT_NEAR(student_t_cdf(1.96, 1000), oracle::numeric_distribution_oracle(Distribution::t, {1000, 0}, 1.96), 1e-10);
}

TEST(TDistribution, CauchyClosedForm) {
  for (double t : {-3.0, -0.5, 0.2, 4.0}) EXPECT_NEAR(student_t_cdf(t, 1), 0.5 + std::atan(t) / std::numbers::pi, 1e-14);
}

TEST(FDistribution, Basics) {
  EXPECT_EQ(f_cdf(0, 3, 7), 0.0);
  for (double d : {1.0, 4.0, 17.0, 120.0}) EXPECT_NEAR(f_cdf(1, d, d), 0.5, 1e-13);
  EXPECT_THROW(f_cdf(-1, 2, 3), Error);
  EXPECT_NEAR(f_cdf(2.5, 3, 9) + f_sf(2.5, 3, 9), 1.0, 1e-14);
}

TEST(FDistribution, TBridge) {
  for (double t : {0.3, 1.0, 2.2, 5.0}) {
    for (double df : {3.0, 12.0, 60.0}) EXPECT_NEAR(f_cdf(t * t, 1, df), 2 * student_t_cdf(t, df) - 1, 1e-10);
  }
}

TEST(FDistribution, TableFootnoteValueAgainstOracle) {
  const double p = f_sf(12.54, 1, 99);
  EXPECT_NEAR(p, oracle::numeric_sf(Distribution::f, {1, 99}, 12.54), 1e-10);
  EXPECT_GT(p, 0.0005);
  EXPECT_LT(p, 0.002);
}

TEST(FDistribution, AgainstOracleGrid) {
  for (double f : {0.05, 0.5, 1.0, 2.0, 4.5, 9.0, 30.0}) {
    for (auto [d1, d2] : {std::pair{1.0, 5.0}, {2.0, 97.0}, {3.0, 94.0}, {6.0, 12.0}}) {
      EXPECT_NEAR(f_cdf(f, d1, d2), oracle::numeric_distribution_oracle(Distribution::f, {d1, d2}, f), 1e-9)
          << f << " " << d1 << " " << d2;
    }
  }
}

TEST(IncompleteBeta, ReflectionIdentity) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 50.0}) {
    for (double b : {0.5, 1.5, 3.0, 49.5}) {
      for (double x = 0.05; x < 1.0; x += 0.1)
        EXPECT_NEAR(incomplete_beta(a, b, x), 1.0 - incomplete_beta(b, a, 1.0 - x), 1e-12) << a << " " << b << " " << x;
    }
  }
}

TEST(IncompleteBeta, ClosedForms) {
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(incomplete_beta(1, 1, x), x, 1e-15);
    EXPECT_NEAR(incomplete_beta(2, 1, x), x * x, 1e-15);
    EXPECT_NEAR(incomplete_beta(1, 3, x), 1 - std::pow(1 - x, 3), 1e-15);
  }
  EXPECT_THROW(incomplete_beta(1, 1, 1.5), Error);
  EXPECT_THROW(incomplete_beta(0, 1, 0.5), Error);
}
