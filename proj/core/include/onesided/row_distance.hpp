#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"
#include "onesided/kernel_regression.hpp"

namespace onesided {

/// Debiased squared row distances d-hat^2(u, v).
///
/// Only columns where both rows have a defined estimate (W > 0) enter a
/// pair's sum, and the 1/m normalization uses that valid-column count.
/// Off-diagonal values may be negative; they are kept as is.
struct RowDistanceMatrix {
  Eigen::MatrixXd dsq;
  /// Number of valid columns per pair; 0 marks an incomparable pair.
  Eigen::MatrixXi valid_cols;

  std::size_t size() const { return static_cast<std::size_t>(dsq.rows()); }
  bool comparable(std::size_t u, std::size_t v) const {
    return u == v || valid_cols(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > 0;
  }
  double operator()(std::size_t u, std::size_t v) const {
    return dsq(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }
};

/// xi^2_uv computed term by term:
///   sigma^2 / |V| * sum_{i in V} sum_l (E'_ul / W_ui^2 + E'_vl / W_vi^2) K^2((beta_l - beta_i)/h)
/// where V is the set of columns valid for both rows. Returns 0 when V is empty.
double xi_correction(const RowRegressionFit& fit, const ObservationMask& mask,
                     const CovariateSet& beta, double sigma, std::size_t u, std::size_t v);

/// Step 2 for all pairs. Uses the identity sum_l E'_ul K^2(.) = W_ui, so
/// the correction reduces to sigma^2 / |V| * sum_{i in V} (1/W_ui + 1/W_vi).
/// The diagonal is 0 by definition.
RowDistanceMatrix estimate_distances(const RowRegressionFit& fit, double sigma, unsigned jobs = 1);

/// Noiseless smoother f-tilde: the Step-1 estimator applied to F on E'.
RowRegressionFit oracle_smoothed_fit(const GroundTruthInstance& truth, const ObservationMask& mask,
                                     double h);

/// d-tilde^2(u, v) between smoothed noiseless rows, same valid-column rule.
double oracle_smoothed_distance_sq(const GroundTruthInstance& truth, const ObservationMask& mask,
                                   double h, std::size_t u, std::size_t v);
/// Same quantity from a precomputed oracle_smoothed_fit.
double smoothed_distance_sq(const RowRegressionFit& smoothed, std::size_t u, std::size_t v);

/// d^2(u, v) = (1/m) sum_l (F_ul - F_vl)^2.
double true_distance_sq(const GroundTruthInstance& truth, std::size_t u, std::size_t v);

}  // namespace onesided
