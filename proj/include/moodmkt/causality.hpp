#pragma once

// Augmented Dickey-Fuller unit-root test and bivariate Granger causality.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodmkt/correlation.hpp"
#include "moodmkt/distributions.hpp"
#include "moodmkt/ols.hpp"
#include "moodmkt/panel.hpp"

namespace moodmkt {

// ---------------------------------------------------------------------------------------------
// ADF

enum class Deterministic { none, constant, constant_trend };

inline std::string_view to_string(Deterministic d) {
  switch (d) {
    case Deterministic::none: return "none";
    case Deterministic::constant: return "constant";
    case Deterministic::constant_trend: return "constant+trend";
  }
  return "?";
}

enum class AdfLevel { one, five, ten };

inline AdfLevel adf_level(double level) {
  if (std::fabs(level - 0.01) < 1e-12) return AdfLevel::one;
  if (std::fabs(level - 0.05) < 1e-12) return AdfLevel::five;
  if (std::fabs(level - 0.10) < 1e-12) return AdfLevel::ten;
  throw Error("ADF level must be one of 0.01, 0.05, 0.10 (got " + format_number(level) + ")");
}

struct AdfResult {
  double gamma_hat = 0;
  double t_stat = 0;
  std::size_t lags_used = 0;
  std::size_t n_obs = 0;  // rows in the final test regression
  Deterministic deterministic = Deterministic::constant_trend;
  std::array<double, 3> critical_values{};  // 1%, 5%, 10%
  double level = 0.05;
  bool reject_unit_root = false;

  double critical_value() const { return critical_values[static_cast<std::size_t>(adf_level(level))]; }
};

/// MacKinnon (2010) response surface for one series: cv(T) = b0 + b1/T + b2/T^2 + b3/T^3.
inline std::array<double, 3> adf_critical_values(Deterministic spec, std::size_t nobs) {
  static constexpr double kNone[3][4] = {
      {-2.56574, -2.2358, -3.627, 0.0}, {-1.941, -0.2686, -3.365, 31.223}, {-1.61682, 0.2656, -2.714, 25.364}};
  static constexpr double kConst[3][4] = {
      {-3.43035, -6.5393, -16.786, -79.433}, {-2.86154, -2.8903, -4.234, -40.04}, {-2.56677, -1.5384, -2.809, 0.0}};
  static constexpr double kTrend[3][4] = {{-3.95877, -9.0531, -28.428, -134.155},
                                          {-3.41049, -4.3904, -9.036, -45.374},
                                          {-3.12705, -2.5856, -3.925, -22.38}};
  const auto& table = spec == Deterministic::none ? kNone : spec == Deterministic::constant ? kConst : kTrend;
  const double inv = 1.0 / static_cast<double>(nobs);
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& b = table[i];
    out[i] = b[0] + b[1] * inv + b[2] * inv * inv + b[3] * inv * inv * inv;
  }
  return out;
}

namespace detail {

inline std::size_t deterministic_terms(Deterministic d) {
  return d == Deterministic::none ? 0 : d == Deterministic::constant ? 1 : 2;
}

// Test regression for lag order k over rows t = first..n-1 (indices into the level series).
// Column order: [const] [trend] y_{t-1} dy_{t-1} .. dy_{t-k}.
inline std::pair<Matrix, std::vector<double>> adf_design(std::span<const double> y, Deterministic d, std::size_t k,
                                                         std::size_t first) {
  const std::size_t n = y.size();
  const std::size_t det = deterministic_terms(d);
  Matrix x(n - first, det + 1 + k);
  std::vector<double> dy(n - first);
  for (std::size_t t = first; t < n; ++t) {
    const std::size_t r = t - first;
    std::size_t c = 0;
    if (det >= 1) x(r, c++) = 1.0;
    if (det >= 2) x(r, c++) = static_cast<double>(t);
    x(r, c++) = y[t - 1];
    for (std::size_t j = 1; j <= k; ++j) x(r, c++) = y[t - j] - y[t - j - 1];
    dy[r] = y[t] - y[t - 1];
  }
  return {std::move(x), std::move(dy)};
}

}  // namespace detail

inline constexpr std::size_t kAdfMinLength = 20;

/// Schwert's rule, floor(12 * (n/100)^(1/4)).
inline std::size_t schwert_max_lags(std::size_t n) {
  return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

/// ADF test. The augmentation order is chosen by AIC over 0..max_lags (Schwert bound when not
/// given), all candidates fit on the same sample; the chosen order is then refit on every
/// available row. Rejection is left-tailed against the response-surface critical value.
inline AdfResult adf_test(std::span<const double> series, double level = 0.05,
                          Deterministic spec = Deterministic::constant_trend,
                          std::optional<std::size_t> max_lags = std::nullopt) {
  const std::size_t n = series.size();
  if (n < kAdfMinLength) throw Error("ADF: series has " + std::to_string(n) + " observations, need at least 20");
  const AdfLevel lvl = adf_level(level);
  bool constant = true;
  for (double v : series) constant = constant && v == series[0];
  if (constant) throw Error("ADF: zero variance");

  const std::size_t det = detail::deterministic_terms(spec);
  // Keep the widest regression comfortably overdetermined.
  const std::size_t cap = (n - 1) / 2 > det + 1 ? (n - 1) / 2 - det - 1 : 0;
  const std::size_t kmax = std::min(max_lags.value_or(schwert_max_lags(n)), cap);

  std::size_t best_k = 0;
  if (kmax > 0) {
    double best_aic = INFINITY;
    const std::size_t first = kmax + 1;
    for (std::size_t k = 0; k <= kmax; ++k) {
      auto [x, dy] = detail::adf_design(series, spec, k, first);
      auto fit = ols(x, dy);
      const double nobs = static_cast<double>(fit.n_obs);
      const double aic = nobs * std::log(fit.rss / nobs) + 2.0 * static_cast<double>(fit.n_params);
      if (aic < best_aic) {
        best_aic = aic;
        best_k = k;
      }
    }
  }

  auto [x, dy] = detail::adf_design(series, spec, best_k, best_k + 1);
  auto fit = ols(x, dy);
  AdfResult out;
  out.gamma_hat = fit.coefficients[det];
  out.t_stat = fit.t_stat(det);
  out.lags_used = best_k;
  out.n_obs = fit.n_obs;
  out.deterministic = spec;
  out.critical_values = adf_critical_values(spec, fit.n_obs);
  out.level = level;
  out.reject_unit_root = out.t_stat < out.critical_values[static_cast<std::size_t>(lvl)];
  return out;
}

// ---------------------------------------------------------------------------------------------
// Granger

struct GrangerResult {
  std::string cause;
  std::string effect;
  int lag = 1;
  double f_stat = 0;
  double p_value = 1;
  double rss_restricted = 0;
  double rss_unrestricted = 0;
  std::size_t n_effective = 0;  // rows used by both regressions (n - lag)
  std::size_t df_num = 0;
  std::size_t df_den = 0;
  std::vector<double> added_coefficients;  // coefficients on cause lags 1..p
  std::vector<double> added_t_stats;

  Stars stars() const { return stars_for(p_value); }
};

/// Does `cause` Granger-cause `effect` at lag p? Restricted model: effect on a constant and its own
/// p lags. Unrestricted: plus p lags of the cause. Both are fit on the same n - p rows and
/// F = ((RSS0 - RSS1) / p) / (RSS1 / (n_eff - 2p - 1)).
inline GrangerResult granger_test(std::span<const double> effect, std::span<const double> cause, int lag_p) {
  if (effect.size() != cause.size()) throw Error("granger: series lengths differ");
  if (lag_p < 1) throw Error("granger: lag must be at least 1");
  const std::size_t n = effect.size();
  const auto p = static_cast<std::size_t>(lag_p);
  if (n <= p || n - p < 2 * p + 2)
    throw Error("granger: insufficient length: " + std::to_string(n) + " observations for lag " + std::to_string(p));
  const std::size_t rows = n - p;

  Matrix restricted(rows, 1 + p);
  Matrix unrestricted(rows, 1 + 2 * p);
  std::vector<double> y(rows);
  for (std::size_t t = p; t < n; ++t) {
    const std::size_t r = t - p;
    y[r] = effect[t];
    restricted(r, 0) = 1.0;
    unrestricted(r, 0) = 1.0;
    for (std::size_t i = 1; i <= p; ++i) {
      restricted(r, i) = effect[t - i];
      unrestricted(r, i) = effect[t - i];
      unrestricted(r, p + i) = cause[t - i];
    }
  }
  const auto fit0 = ols(restricted, y);
  const auto fit1 = ols(unrestricted, y);

  GrangerResult out;
  out.lag = lag_p;
  out.n_effective = rows;
  out.df_num = p;
  out.df_den = rows - 2 * p - 1;
  out.rss_restricted = fit0.rss;
  // Nested fits: RSS1 can only exceed RSS0 by rounding.
  out.rss_unrestricted = std::min(fit1.rss, fit0.rss);
  if (out.rss_unrestricted <= 0) throw Error("granger: unrestricted model fits exactly, F is undefined");
  out.f_stat = ((out.rss_restricted - out.rss_unrestricted) / static_cast<double>(p)) /
               (out.rss_unrestricted / static_cast<double>(out.df_den));
  out.p_value = f_sf(out.f_stat, static_cast<double>(out.df_num), static_cast<double>(out.df_den));
  for (std::size_t i = 1; i <= p; ++i) {
    out.added_coefficients.push_back(fit1.coefficients[p + i]);
    out.added_t_stats.push_back(fit1.t_stat(p + i));
  }
  return out;
}

struct GrangerOutcome {
  std::optional<GrangerResult> result;
  std::string error;  // set when result is empty
};

/// One (sentiment, market, lag) cell holding both directions.
struct GrangerCell {
  std::string sentiment;
  std::string market;
  int lag = 1;
  GrangerOutcome twitter_to_bitcoin;  // sentiment causes market
  GrangerOutcome bitcoin_to_twitter;  // market causes sentiment
};

struct StationarityCheck {
  std::string column;
  std::optional<AdfResult> adf;
  std::string error;
  bool passed() const { return adf && adf->reject_unit_root; }
};

struct GrangerMatrix {
  std::vector<GrangerCell> cells;  // sentiment-major, then market, then lag
  std::vector<StationarityCheck> stationarity;
  bool gate_overridden = false;
  double level = 0.05;
};

struct GrangerMatrixOptions {
  double level = 0.05;
  bool override_stationarity = false;
  Deterministic adf_spec = Deterministic::constant_trend;
  std::optional<std::size_t> adf_max_lags;
};

inline GrangerOutcome try_granger(std::span<const double> effect, std::span<const double> cause, int lag,
                                  std::string_view effect_name, std::string_view cause_name) {
  GrangerOutcome out;
  try {
    out.result = granger_test(effect, cause, lag);
    out.result->cause = cause_name;
    out.result->effect = effect_name;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

/// Both-direction Granger tests for every (sentiment, market) pair and lag. Every column must
/// first reject a unit root at `level`, unless the override is set (the override is recorded).
inline GrangerMatrix granger_matrix(const AlignedPanel& panel, const std::vector<std::string>& sentiment_cols,
                                    const std::vector<std::string>& market_cols, const std::vector<int>& lags,
                                    const GrangerMatrixOptions& options = {}) {
  adf_level(options.level);
  GrangerMatrix m;
  m.level = options.level;
  m.gate_overridden = options.override_stationarity;

  std::vector<std::string> all = sentiment_cols;
  all.insert(all.end(), market_cols.begin(), market_cols.end());
  std::string failures;
  for (const auto& name : all) {
    StationarityCheck check{name, std::nullopt, {}};
    try {
      check.adf = adf_test(panel.column(name), options.level, options.adf_spec, options.adf_max_lags);
    } catch (const Error& e) {
      if (!panel.has(name)) throw;
      check.error = e.what();
    }
    if (!check.passed()) failures += (failures.empty() ? "" : ", ") + name;
    m.stationarity.push_back(std::move(check));
  }
  if (!failures.empty() && !options.override_stationarity)
    throw Error("stationarity gate: unit root not rejected at " + format_number(options.level) + " for " + failures +
                " (override to proceed)");

  for (const auto& s : sentiment_cols) {
    for (const auto& mk : market_cols) {
      for (int lag : lags) {
        const auto& xs = panel.column(s);
        const auto& xm = panel.column(mk);
        m.cells.push_back(GrangerCell{s, mk, lag, try_granger(xm, xs, lag, mk, s), try_granger(xs, xm, lag, s, mk)});
      }
    }
  }
  return m;
}

}  // namespace moodmkt
