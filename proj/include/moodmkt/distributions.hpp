#pragma once

// Student t and Fisher F distribution functions through the regularized incomplete beta.

#include <cmath>
#include <string>

#include "moodmkt/core.hpp"

namespace moodmkt {

namespace detail {

inline constexpr int kBetaMaxIterations = 300;
inline constexpr double kBetaEpsilon = 1e-15;
inline constexpr double kBetaTiny = 1e-300;

/// Continued fraction for I_x(a, b), modified Lentz. Converges fast for x < (a+1)/(a+b+2).
inline double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kBetaTiny) d = kBetaTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaEpsilon) return h;
  }
  throw Error("incomplete beta: continued fraction did not converge for a=" + format_number(a) +
              ", b=" + format_number(b) + ", x=" + format_number(x));
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw Error("incomplete beta: shape parameters must be positive");
  if (!(x >= 0 && x <= 1)) throw Error("incomplete beta: x must lie in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// P(T <= t) for Student's t with `df` degrees of freedom.
inline double student_t_cdf(double t, double df) {
  if (!(df > 0)) throw Error("student t: degrees of freedom must be positive");
  if (std::isnan(t)) throw Error("student t: t is NaN");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t == 0) return 0.5;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

/// Two-tailed p-value P(|T| >= |t|).
inline double student_t_two_tailed(double t, double df) {
  if (!(df > 0)) throw Error("student t: degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  if (t == 0) return 1.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

/// P(F <= f) for Fisher's F with (d1, d2) degrees of freedom.
inline double f_cdf(double f, double d1, double d2) {
  if (!(d1 > 0) || !(d2 > 0)) throw Error("F distribution: degrees of freedom must be positive");
  if (!(f >= 0)) throw Error("F distribution: f must be non-negative");
  if (std::isinf(f)) return 1.0;
  if (f == 0) return 0.0;
  return incomplete_beta(0.5 * d1, 0.5 * d2, d1 * f / (d1 * f + d2));
}

/// Upper tail P(F > f), evaluated directly so small p-values keep their precision.
inline double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0) || !(d2 > 0)) throw Error("F distribution: degrees of freedom must be positive");
  if (!(f >= 0)) throw Error("F distribution: f must be non-negative");
  if (std::isinf(f)) return 0.0;
  if (f == 0) return 1.0;
  return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d1 * f + d2));
}

}  // namespace moodmkt
