#pragma once

// Reference implementations used only to cross-check the production paths: normal equations by
// Gaussian elimination in long double, and distribution CDFs by adaptive quadrature of the
// density. Neither shares code with ols() or incomplete_beta().

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "moodmkt/core.hpp"
#include "moodmkt/ols.hpp"

namespace moodmkt::oracle {

/// Solves (X'X) b = X'y with partial pivoting.
inline std::vector<double> brute_force_ols(const Matrix& design, std::span<const double> response) {
  const std::size_t n = design.rows();
  const std::size_t k = design.cols();
  if (response.size() != n) throw Error("brute_force_ols: response length mismatch");
  if (k == 0 || n < k) throw Error("brute_force_ols: bad dimensions");

  std::vector<std::vector<long double>> aug(k, std::vector<long double>(k + 1, 0.0L));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      long double s = 0;
      for (std::size_t r = 0; r < n; ++r) s += static_cast<long double>(design(r, i)) * design(r, j);
      aug[i][j] = s;
    }
    long double s = 0;
    for (std::size_t r = 0; r < n; ++r) s += static_cast<long double>(design(r, i)) * response[r];
    aug[i][k] = s;
  }
  long double scale = 0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::fabs(aug[i][i]));

  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::fabs(aug[r][c]) > std::fabs(aug[piv][c])) piv = r;
    }
    if (std::fabs(aug[piv][c]) <= 1e-17L * scale) throw Error("brute_force_ols: singular normal matrix");
    std::swap(aug[c], aug[piv]);
    for (std::size_t r = c + 1; r < k; ++r) {
      const long double f = aug[r][c] / aug[c][c];
      for (std::size_t j = c; j <= k; ++j) aug[r][j] -= f * aug[c][j];
    }
  }
  std::vector<long double> b(k);
  for (std::size_t i = k; i-- > 0;) {
    long double s = aug[i][k];
    for (std::size_t j = i + 1; j < k; ++j) s -= aug[i][j] * b[j];
    b[i] = s / aug[i][i];
  }
  return std::vector<double>(b.begin(), b.end());
}

// ---------------------------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7/15) quadrature.

inline constexpr double kQuadTolerance = 1e-9;

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the 7-point rule, attached to Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
};

inline Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = kKronrodWeights[7] * f(mid);
  double gauss = kGaussWeights[3] * f(mid);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double s = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * s;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half)};
}

struct Piece {
  double a, b;
  Estimate est;
  bool operator<(const Piece& o) const { return est.error < o.est.error; }
};

// Global adaptive scheme: always bisect the piece with the largest error estimate.
inline double adaptive(const std::function<double(double)>& f, double a, double b, double tol, int max_splits) {
  std::priority_queue<Piece> pieces;
  pieces.push({a, b, gauss_kronrod(f, a, b)});
  double value = pieces.top().est.value;
  double error = pieces.top().est.error;
  for (int i = 0;; ++i) {
    if (error <= tol || error <= 64 * std::numeric_limits<double>::epsilon() * std::fabs(value)) return value;
    if (i == max_splits || !std::isfinite(error))
      throw Error("quadrature oracle: tolerance not reached on [" + format_number(a) + ", " + format_number(b) + "]");
    const Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left{worst.a, mid, gauss_kronrod(f, worst.a, mid)};
    const Piece right{mid, worst.b, gauss_kronrod(f, mid, worst.b)};
    value += left.est.value + right.est.value - worst.est.value;
    error += left.est.error + right.est.error - worst.est.error;
    pieces.push(left);
    pieces.push(right);
  }
}

}  // namespace detail

/// Integral of f over [a, b] to absolute tolerance `tol`; throws when the tolerance is not met.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = kQuadTolerance) {
  return detail::adaptive(f, a, b, tol, 5000);
}

inline double t_density(double x, double df) {
  const double log_norm = std::lgamma(0.5 * (df + 1)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (df + 1) * std::log1p(x * x / df));
}

inline double f_density(double x, double d1, double d2) {
  if (x <= 0) return 0;
  const double log_norm = std::lgamma(0.5 * (d1 + d2)) - std::lgamma(0.5 * d1) - std::lgamma(0.5 * d2) +
                          0.5 * d1 * std::log(d1 / d2);
  return std::exp(log_norm + (0.5 * d1 - 1) * std::log(x) - 0.5 * (d1 + d2) * std::log1p(d1 * x / d2));
}

enum class Distribution { t, f };

struct DistributionParams {
  double df1 = 1;  // t: degrees of freedom; F: numerator df
  double df2 = 1;  // F: denominator df
};

/// Upper tail P(X > x) by quadrature. Tails beyond 1 use the substitution x = 1/s.
inline double numeric_sf(Distribution kind, DistributionParams p, double x) {
  if (kind == Distribution::t) {
    if (!(p.df1 > 0)) throw Error("quadrature oracle: df must be positive");
    if (x < 0) return 1.0 - numeric_sf(kind, p, -x);
    if (x == 0) return 0.5;
    auto dens = [&](double v) { return t_density(v, p.df1); };
    if (x <= 1) return 0.5 - integrate(dens, 0, x);
    auto tail = [&](double s) { return s == 0 ? 0.0 : t_density(1 / s, p.df1) / (s * s); };
    return integrate(tail, 0, 1 / x);
  }
  if (!(p.df1 > 0) || !(p.df2 > 0)) throw Error("quadrature oracle: df must be positive");
  if (x < 0) throw Error("quadrature oracle: F argument must be non-negative");
  if (x == 0) return 1.0;
  if (x <= 1) {
    auto body = [&](double s) { return s == 0 ? 0.0 : 2 * s * f_density(s * s, p.df1, p.df2); };
    return 1.0 - integrate(body, 0, std::sqrt(x));
  }
  auto tail = [&](double s) { return s == 0 ? 0.0 : f_density(1 / s, p.df1, p.df2) / (s * s); };
  return integrate(tail, 0, 1 / x);
}

/// CDF P(X <= x) by quadrature of the density.
inline double numeric_distribution_oracle(Distribution kind, DistributionParams p, double x) {
  if (kind == Distribution::t && x == 0) return 0.5;
  if (kind == Distribution::f && x == 0) return 0.0;
  return 1.0 - numeric_sf(kind, p, x);
}

}  // namespace moodmkt::oracle
