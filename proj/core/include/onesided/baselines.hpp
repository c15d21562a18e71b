#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"
#include "onesided/random.hpp"

namespace onesided {

struct AlsConfig {
  std::size_t rank = 2;
  double ridge = 1e-3;
  std::size_t max_sweeps = 200;
  /// Stop when the relative objective change over a sweep drops below tol.
  double tol = 1e-6;
  SeedSpec seed;
};

/// Rank-r alternating ridge least squares over observed entries, started from
/// uniform(-0.01, 0.01) factors. When trace is given, the objective
///   sum_E (X - U V^T)^2 + ridge (||U||^2 + ||V||^2)
/// is appended after initialization and after every half-sweep.
DenseEstimate als_fit(const ObservedDataset& ds, const AlsConfig& cfg,
                      std::vector<double>* trace = nullptr);

struct SoftImputeConfig {
  /// Strictly descending shrinkage values, each >= 0.
  std::vector<double> lambda_grid;
  std::size_t max_iters = 300;
  /// Relative squared change ||Z_new - Z||^2 / ||Z||^2 to stop at.
  double tol = 1e-5;
  /// Singular values kept after thresholding; 0 means min(n, m).
  std::size_t rank_cap = 0;

  void validate() const;
};

/// 20-point geometric grid from sigma_1(P_E(X)) down to sigma_1 / 1000.
std::vector<double> default_lambda_grid(const ObservedDataset& ds, std::size_t points = 20);
SoftImputeConfig default_softimpute_config(const ObservedDataset& ds);

/// Singular-value soft-thresholding: U max(S - lambda, 0) V^T, keeping at most
/// rank_cap values. lambda = 0 without truncation returns the input.
Eigen::MatrixXd soft_threshold_svd(const Eigen::MatrixXd& matrix, double lambda, std::size_t rank_cap,
                                   double* nuclear_norm = nullptr);

/// Visits the warm-started solution after each lambda in the grid.
using SoftImputeVisitor = std::function<void(std::size_t index, double lambda, const Eigen::MatrixXd& z)>;

/// Iterates Z <- S_lambda(P_E(X) + P_E-perp(Z)) for each lambda in the grid,
/// warm-starting from the previous solution. With trace, appends the
/// objective 1/2 ||P_E(X - Z)||_F^2 + lambda ||Z||_* after every iteration.
void softimpute_path(const ObservedDataset& ds, const SoftImputeConfig& cfg,
                     const SoftImputeVisitor& visit, std::vector<double>* trace = nullptr);

/// Solution at the last lambda of the grid.
DenseEstimate softimpute_fit(const ObservedDataset& ds, const SoftImputeConfig& cfg,
                             std::vector<double>* trace = nullptr);

}  // namespace onesided
