#pragma once

// Deterministic synthetic data: a SplitMix64 stream, Box-Muller Gaussians, a bivariate VAR
// simulator, and a synthetic tweet corpus plus market series with a known causal structure.
//
// SplitMix64 reference outputs (seed 0): 0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4,
// 0x06c45d188009454f, 0xf88bb8a8724c81ec.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "moodmkt/core.hpp"
#include "moodmkt/lexicon.hpp"
#include "moodmkt/market.hpp"

namespace moodmkt {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled to [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by multiply-shift; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Standard normal deviates by the Box-Muller transform: u1 = 1 - uniform() in (0, 1],
/// u2 = uniform(), emitting r cos(2 pi u2) then r sin(2 pi u2).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - rng_.uniform();
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  SplitMix64& engine() { return rng_; }

 private:
  SplitMix64 rng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

/// z_t = sum_l A_l z_{t-l} + (sigma_x e_t, sigma_y u_t) with z = (x, y). A_l[i][j] is the effect
/// of series j at lag l on series i, so A_l[1][0] is the X -> Y cross term.
struct VarSpec {
  using Coeff = std::array<std::array<double, 2>, 2>;

  int lag_order = 1;
  std::vector<Coeff> coeff{Coeff{}};
  std::array<double, 2> noise_sigma{1.0, 1.0};
  std::size_t length = 500;
  std::uint64_t seed = 0;
  std::size_t burn_in = 100;

  static VarSpec white_noise(std::size_t length, std::uint64_t seed) {
    VarSpec s;
    s.length = length;
    s.seed = seed;
    return s;
  }
};

/// Spectral radius of the VAR companion matrix.
inline double companion_spectral_radius(const VarSpec& spec) {
  const int p = spec.lag_order;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  for (int l = 0; l < p; ++l) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) companion(i, 2 * l + j) = spec.coeff[static_cast<std::size_t>(l)][i][j];
    }
  }
  for (int r = 2; r < 2 * p; ++r) companion(r, r - 2) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline void validate(const VarSpec& spec) {
  if (spec.lag_order < 1) throw Error("VAR: lag order must be at least 1");
  if (spec.coeff.size() != static_cast<std::size_t>(spec.lag_order))
    throw Error("VAR: expected one coefficient matrix per lag");
  if (!(spec.noise_sigma[0] > 0) || !(spec.noise_sigma[1] > 0)) throw Error("VAR: noise sigma must be positive");
  if (spec.length == 0) throw Error("VAR: length must be positive");
  const double rho = companion_spectral_radius(spec);
  if (!(rho < 1.0)) throw Error("VAR: non-stationary specification (companion spectral radius " + format_number(rho) + ")");
}

struct VarSeries {
  std::vector<double> x;
  std::vector<double> y;
};

/// Simulates from a zero initial state and drops the first burn_in steps. Same spec, same bits.
inline VarSeries simulate_var(const VarSpec& spec) {
  validate(spec);
  const auto p = static_cast<std::size_t>(spec.lag_order);
  const std::size_t total = spec.burn_in + spec.length;
  std::vector<double> x(total + p, 0.0), y(total + p, 0.0);
  GaussianStream g(spec.seed);
  for (std::size_t t = p; t < total + p; ++t) {
    double xt = spec.noise_sigma[0] * g.next();
    double yt = spec.noise_sigma[1] * g.next();
    for (std::size_t l = 1; l <= p; ++l) {
      const auto& a = spec.coeff[l - 1];
      xt += a[0][0] * x[t - l] + a[0][1] * y[t - l];
      yt += a[1][0] * x[t - l] + a[1][1] * y[t - l];
    }
    x[t] = xt;
    y[t] = yt;
  }
  const auto skip = static_cast<std::ptrdiff_t>(p + spec.burn_in);
  return VarSeries{std::vector<double>(x.begin() + skip, x.end()), std::vector<double>(y.begin() + skip, y.end())};
}

/// Random walk and AR(1) helpers for the unit-root calibration runs.
inline std::vector<double> simulate_random_walk(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  std::vector<double> out(n);
  double level = 0;
  for (auto& v : out) {
    level += g.next();
    v = level;
  }
  return out;
}

inline std::vector<double> simulate_ar1(std::size_t n, double phi, double intercept, std::uint64_t seed,
                                        std::size_t burn_in = 100) {
  GaussianStream g(seed);
  std::vector<double> out(n);
  double level = intercept / (1.0 - phi);
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    level = intercept + phi * level + g.next();
    if (t >= burn_in) out[t - burn_in] = level;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Synthetic study: tweets and one market, with trading volume driving uncertainty tweets.

struct SyntheticStudyOptions {
  std::size_t days = 104;
  std::uint64_t seed = 20131123;
  Date start{2013, 11, 23};
  double volume_to_uncertainty = 0.6;
};

struct SyntheticStudy {
  std::vector<TweetRecord> tweets;
  std::vector<DailyMarket> market;
};

inline SyntheticStudy synthesize_study(const SyntheticStudyOptions& opt = {}) {
  if (opt.days < 8) throw Error("synthetic study needs at least 8 days");
  // Extra trailing days so the two-day delta price is defined over the whole tweet span.
  const std::size_t market_days = opt.days + 2;

  VarSpec drive;  // x: volume factor, y: uncertainty factor
  drive.coeff = {VarSpec::Coeff{{{0.4, 0.0}, {opt.volume_to_uncertainty, 0.2}}}};
  drive.length = market_days;
  drive.seed = opt.seed;
  const auto vu = simulate_var(drive);

  VarSpec mood;  // x: positive factor, y: negative factor
  mood.coeff = {VarSpec::Coeff{{{0.3, 0.0}, {0.0, 0.3}}}};
  mood.length = market_days;
  mood.seed = opt.seed ^ 0x5bd1e995ULL;
  const auto pn = simulate_var(mood);

  const auto price = simulate_ar1(market_days, 0.5, 0.0, opt.seed + 1);
  GaussianStream g(opt.seed + 2);

  SyntheticStudy study;
  double prev_close = 700.0;
  for (std::size_t d = 0; d < market_days; ++d) {
    DailyMarket m;
    m.date = opt.start + static_cast<std::int64_t>(d);
    m.close = 700.0 + 15.0 * price[d];
    m.open = prev_close + 4.0 * g.next();
    m.high = std::max(m.open, m.close) + 0.5 + 6.0 * std::fabs(g.next());
    m.low = std::min(m.open, m.close) - 0.5 - 6.0 * std::fabs(g.next());
    m.volume_btc = std::max(1000.0, 20000.0 + 5000.0 * vu.x[d]);
    m.volume_ccy = m.volume_btc * m.close;
    prev_close = m.close;
    study.market.push_back(m);
  }

  static constexpr std::array<const char*, 5> kPositive = {
      "feeling good about #bitcoin today", "I love bitcoin so much", "bitcoin is great, buying more",
      "lucky day for my bitcoin wallet", "awesome rally on Bitcoin"};
  static constexpr std::array<const char*, 4> kNegative = {
      "bitcoin makes me sad", "bad day for bitcoin holders", "so upset about bitcoin fees",
      "nervous about my bitcoin position"};
  static constexpr std::array<const char*, 3> kUncertainty = {
      "i hope bitcoin recovers", "fear is spreading in the bitcoin market", "starting to worry about bitcoin"};
  static constexpr std::array<const char*, 5> kNoise = {
      "bitcoin price update", "happy birthday! celebrate with bitcoin", "bitcoin is not bad at all",
      "great weather today", "new bitcoin exchange opens"};

  auto clamp_count = [](double v, std::int64_t lo) {
    return std::max<std::int64_t>(lo, static_cast<std::int64_t>(std::llround(v)));
  };

  std::size_t id = 0;
  auto emit = [&](Date day, const char* text, std::size_t n_authors, const char* author_prefix) {
    const std::int64_t secs = day.serial() * 86400 + static_cast<std::int64_t>(g.engine().below(86400));
    TweetRecord t;
    t.id = std::to_string(++id);
    t.author = std::string(author_prefix) + std::to_string(g.engine().below(n_authors));
    t.timestamp = secs;
    t.text = text;
    study.tweets.push_back(std::move(t));
  };

  for (std::size_t d = 0; d < opt.days; ++d) {
    const Date day = opt.start + static_cast<std::int64_t>(d);
    const auto n_pos = clamp_count(60.0 + 10.0 * pn.x[d], 0);
    const auto n_neg = clamp_count(12.0 + 3.0 * pn.y[d], 1);
    const auto n_unc = clamp_count(20.0 + 5.0 * vu.y[d], 0);
    for (std::int64_t i = 0; i < n_pos; ++i) emit(day, kPositive[g.engine().below(kPositive.size())], 1u << 20, "user");
    for (std::int64_t i = 0; i < n_neg; ++i) emit(day, kNegative[g.engine().below(kNegative.size())], 1u << 20, "user");
    for (std::int64_t i = 0; i < n_unc; ++i)
      emit(day, kUncertainty[g.engine().below(kUncertainty.size())], 1u << 20, "user");
    for (int i = 0; i < 5; ++i) emit(day, kNoise[g.engine().below(kNoise.size())], 1u << 20, "user");
    // Bot output carries sentiment terms but must be filtered before counting.
    for (int i = 0; i < 3; ++i) emit(day, "great bitcoin deals, love it", 4, "deals_bot");
  }
  return study;
}

}  // namespace moodmkt
