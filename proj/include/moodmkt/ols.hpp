#pragma once

// Least squares by Householder QR with column pivoting.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moodmkt/core.hpp"

namespace moodmkt {

/// Dense row-major matrix, just enough for regression designs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  /// Builds a matrix from columns of equal length.
  static Matrix from_columns(const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) return {};
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != m.rows()) throw Error("design columns have unequal lengths");
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct OlsFit {
  std::vector<double> coefficients;  // in design-column order
  std::vector<double> std_errors;    // sqrt(sigma^2 * diag((X'X)^-1)); empty when n_obs == n_params
  std::vector<double> residuals;
  double rss = 0;
  std::size_t n_obs = 0;
  std::size_t n_params = 0;

  std::size_t df_residual() const { return n_obs - n_params; }
  double t_stat(std::size_t j) const { return coefficients.at(j) / std_errors.at(j); }
};

inline constexpr double kRankTolerance = 1e-10;

namespace detail {

// Gram-Schmidt (twice) in original column order; the first column whose remainder vanishes is the
// one spanned by the columns before it.
inline std::optional<std::size_t> first_dependent_column(const Matrix& design, double threshold) {
  const std::size_t n = design.rows();
  std::vector<std::vector<double>> basis;
  for (std::size_t c = 0; c < design.cols(); ++c) {
    auto v = design.column(c);
    double own = 0;
    for (double x : v) own += x * x;
    own = std::sqrt(own);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double d = 0;
        for (std::size_t r = 0; r < n; ++r) d += q[r] * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= d * q[r];
      }
    }
    double rem = 0;
    for (double x : v) rem += x * x;
    rem = std::sqrt(rem);
    if (rem <= std::max(threshold, 1e-9 * own)) return c;
    for (auto& x : v) x /= rem;
    basis.push_back(std::move(v));
  }
  return std::nullopt;
}

}  // namespace detail

/// Fits response ~ design. Throws "collinear regressors" naming the first column (0-based, in
/// design order) that lies in the span of the columns before it.
inline OlsFit ols(const Matrix& design, std::span<const double> response) {
  const std::size_t n = design.rows();
  const std::size_t k = design.cols();
  if (response.size() != n) throw Error("ols: response length does not match design rows");
  if (k == 0) throw Error("ols: empty design");
  if (n <= k) throw Error("ols: need more observations (" + std::to_string(n) + ") than parameters (" + std::to_string(k) + ")");

  // Column-major working copy; the factorization overwrites it with R above the diagonal and the
  // Householder vectors below.
  std::vector<std::vector<double>> a(k, std::vector<double>(n));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < n; ++r) a[c][r] = design(r, c);
  }
  std::vector<double> y(response.begin(), response.end());
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  auto norm2 = [&](const std::vector<double>& v, std::size_t from) {
    double s = 0;
    for (std::size_t r = from; r < n; ++r) s += v[r] * v[r];
    return s;
  };
  double max_norm = 0;
  for (std::size_t c = 0; c < k; ++c) max_norm = std::max(max_norm, std::sqrt(norm2(a[c], 0)));
  const double threshold = kRankTolerance * max_norm;

  std::vector<double> r_diag(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t best = j;
    double best_norm = -1;
    for (std::size_t c = j; c < k; ++c) {
      const double nc = norm2(a[c], j);
      if (nc > best_norm) {
        best_norm = nc;
        best = c;
      }
    }
    std::swap(a[j], a[best]);
    std::swap(perm[j], perm[best]);

    const double alpha_abs = std::sqrt(std::max(best_norm, 0.0));
    if (alpha_abs <= threshold || max_norm == 0) {
      const std::size_t fallback = *std::min_element(perm.begin() + static_cast<std::ptrdiff_t>(j), perm.end());
      const std::size_t offender = detail::first_dependent_column(design, threshold).value_or(fallback);
      throw Error("collinear regressors: design column " + std::to_string(offender) +
                  " is linearly dependent on the others");
    }

    auto& v = a[j];
    const double alpha = v[j] > 0 ? -alpha_abs : alpha_abs;
    v[j] -= alpha;
    const double vnorm2 = norm2(v, j);
    r_diag[j] = alpha;
    if (vnorm2 > 0) {
      for (std::size_t c = j + 1; c < k; ++c) {
        double dot = 0;
        for (std::size_t r = j; r < n; ++r) dot += v[r] * a[c][r];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t r = j; r < n; ++r) a[c][r] -= f * v[r];
      }
      double dot = 0;
      for (std::size_t r = j; r < n; ++r) dot += v[r] * y[r];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = j; r < n; ++r) y[r] -= f * v[r];
    }
  }

  // Back substitution on R (pivoted order): R(i, c) = a[c][i] for c > i, R(i, i) = r_diag[i].
  std::vector<double> beta_p(k);
  for (std::size_t ii = k; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t c = ii + 1; c < k; ++c) s -= a[c][ii] * beta_p[c];
    beta_p[ii] = s / r_diag[ii];
  }

  OlsFit fit;
  fit.n_obs = n;
  fit.n_params = k;
  fit.coefficients.assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) fit.coefficients[perm[j]] = beta_p[j];

  fit.residuals.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    double yhat = 0;
    for (std::size_t c = 0; c < k; ++c) yhat += design(r, c) * fit.coefficients[c];
    fit.residuals[r] = response[r] - yhat;
  }
  fit.rss = std::inner_product(fit.residuals.begin(), fit.residuals.end(), fit.residuals.begin(), 0.0);

  // diag((X'X)^-1) = row norms of R^-1 (pivoted), mapped back through the permutation.
  const double sigma2 = fit.rss / static_cast<double>(n - k);
  std::vector<std::vector<double>> rinv(k, std::vector<double>(k, 0.0));  // rinv[col][row]
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t ii = col + 1; ii-- > 0;) {
      double s = ii == col ? 1.0 : 0.0;
      for (std::size_t c = ii + 1; c <= col; ++c) s -= a[c][ii] * rinv[col][c];
      rinv[col][ii] = s / r_diag[ii];
    }
  }
  fit.std_errors.assign(k, 0.0);
  for (std::size_t ii = 0; ii < k; ++ii) {
    double s = 0;
    for (std::size_t col = ii; col < k; ++col) s += rinv[col][ii] * rinv[col][ii];
    fit.std_errors[perm[ii]] = std::sqrt(sigma2 * s);
  }
  return fit;
}

}  // namespace moodmkt
