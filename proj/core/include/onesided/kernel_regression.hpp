#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"

namespace onesided {

/// Rectangular kernel: 1 iff max_l |b_l| <= 1/2 (closed threshold).
bool rect_kernel(std::span<const double> b);

/// Column acceptance rule in covariate space.
///
/// Bandwidth(h) accepts j when K((beta_i - beta_j) / h) = 1; Radius(eta)
/// accepts j when ||beta_i - beta_j||_inf <= eta. Both are evaluated
/// per coordinate on the scalar difference, which is monotone in beta_j,
/// so the sorted and linear-scan paths agree exactly.
struct ColumnWindow {
  enum class Kind { Bandwidth, Radius };
  Kind kind = Kind::Bandwidth;
  double width = 1.0;

  static ColumnWindow bandwidth(double h) { return {Kind::Bandwidth, h}; }
  static ColumnWindow radius(double eta) { return {Kind::Radius, eta}; }

  /// beta_j lies too far below beta_i (diff = beta_i - beta_j).
  bool beyond_low(double diff) const {
    return kind == Kind::Bandwidth ? diff / width > 0.5 : diff > width;
  }
  bool beyond_high(double diff) const {
    return kind == Kind::Bandwidth ? diff / width < -0.5 : diff < -width;
  }
  bool contains_diff(double diff) const { return !beyond_low(diff) && !beyond_high(diff); }
  bool contains(std::span<const double> target, std::span<const double> other) const {
    for (std::size_t l = 0; l < target.size(); ++l)
      if (!contains_diff(target[l] - other[l])) return false;
    return true;
  }
};

/// Per-row view of observed entries for window queries against column
/// covariates. With d2 = 1 entries are kept sorted by beta and windows are
/// found by binary search; otherwise a row is scanned in column order.
class RowWindowIndex {
 public:
  RowWindowIndex(const ObservationMask& mask, std::span<const double> values, const CovariateSet& beta);

  std::size_t rows() const { return row_ptr_.size() - 1; }

  /// Calls fn(value, column) for each observed entry of row inside window
  /// around target, in ascending beta (d2 = 1) or column order.
  template <class Fn>
  void visit(std::size_t row, std::span<const double> target, const ColumnWindow& window, Fn&& fn) const {
    const std::size_t begin = row_ptr_[row];
    const std::size_t end = row_ptr_[row + 1];
    if (scalar_) {
      const double t = target[0];
      std::size_t lo = begin, hi = end;
      // First entry not beyond_low.
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (window.beyond_low(t - key_[mid])) lo = mid + 1; else hi = mid;
      }
      for (std::size_t k = lo; k < end && !window.beyond_high(t - key_[k]); ++k) fn(value_[k], col_[k]);
      return;
    }
    for (std::size_t k = begin; k < end; ++k)
      if (window.contains(target, (*beta_)[col_[k]])) fn(value_[k], col_[k]);
  }

 private:
  bool scalar_ = false;
  const CovariateSet* beta_ = nullptr;
  std::vector<std::size_t> row_ptr_;
  std::vector<double> key_;
  std::vector<double> value_;
  std::vector<std::size_t> col_;
};

/// Step-1 output: per-row Nadaraya-Watson estimates and window counts.
struct RowRegressionFit {
  /// NaN where weights == 0.
  Eigen::MatrixXd fhat;
  /// W_ui = number of observed j in row u with K((beta_i - beta_j)/h) = 1.
  Eigen::MatrixXi weights;
  double h = 0.0;

  std::size_t rows() const { return static_cast<std::size_t>(fhat.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(fhat.cols()); }
  bool defined(std::size_t u, std::size_t i) const {
    return weights(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) > 0;
  }
};

/// Windowed row means of arbitrary values laid out in the mask's CSR order.
/// Shared by the data path (observed X) and the noiseless oracle (F on E').
RowRegressionFit smooth_rows(const ObservationMask& mask, std::span<const double> values,
                             const CovariateSet& beta, double h, unsigned jobs = 1);

/// Step 1 on a dataset. Throws ConfigError unless h > 0.
RowRegressionFit fit_rows(const ObservedDataset& ds, double h, unsigned jobs = 1);

/// Row mean of u, or the global mean when row u is empty.
double fallback_value(const ObservedDataset& ds, std::size_t u);

/// Each row regressed on its own data; empty windows use fallback_value.
DenseEstimate row_regression_baseline(const ObservedDataset& ds, double h, unsigned jobs = 1);

/// Two-sided kernel regression given the hidden row covariates: averages X
/// over rows within h1 (in alpha) and columns within h2 (in beta).
DenseEstimate oracle_regression(const ObservedDataset& ds, const CovariateSet& alpha, double h1,
                                double h2, unsigned jobs = 1);

}  // namespace onesided
