#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "moodmkt/core.hpp"
#include "moodmkt/distributions.hpp"

namespace moodmkt {

enum class Stars { none, one, two };

/// "*" at the 0.05 level, "**" at 0.01.
inline Stars stars_for(double p) {
  if (p < 0.01) return Stars::two;
  if (p < 0.05) return Stars::one;
  return Stars::none;
}

inline std::string_view to_string(Stars s) {
  switch (s) {
    case Stars::none: return "";
    case Stars::one: return "*";
    case Stars::two: return "**";
  }
  return "";
}

struct CorrelationResult {
  double r = 0;
  std::size_t n = 0;
  double t_stat = 0;
  double p_two_tailed = 1;
  Stars stars = Stars::none;
};

/// Product-moment correlation. Two-pass (centered) so large offsets do not cancel.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: length mismatch");
  if (x.size() < 3) throw Error("pearson: need at least 3 observations");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0 || syy == 0) throw Error("pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// Two-tailed significance with n - 2 degrees of freedom. |r| = 1 gives p = 0.
inline CorrelationResult correlation_significance(double r, std::size_t n) {
  if (n < 3) throw Error("correlation significance: need n >= 3");
  if (!(std::fabs(r) <= 1.0)) throw Error("correlation significance: |r| must be <= 1");
  CorrelationResult out{r, n, 0.0, 1.0, Stars::none};
  const double df = static_cast<double>(n - 2);
  if (std::fabs(r) == 1.0) {
    out.t_stat = r > 0 ? INFINITY : -INFINITY;
    out.p_two_tailed = 0.0;
  } else {
    out.t_stat = r * std::sqrt(df / (1.0 - r * r));
    out.p_two_tailed = student_t_two_tailed(out.t_stat, df);
  }
  out.stars = stars_for(out.p_two_tailed);
  return out;
}

inline CorrelationResult correlate(std::span<const double> x, std::span<const double> y) {
  return correlation_significance(pearson(x, y), x.size());
}

}  // namespace moodmkt
