#include "onesided/kernel_regression.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "onesided/error.hpp"
#include "onesided/parallel.hpp"

namespace onesided {

bool rect_kernel(std::span<const double> b) {
  double norm = 0.0;
  for (double x : b) norm = std::max(norm, std::fabs(x));
  return norm <= 0.5;
}

RowWindowIndex::RowWindowIndex(const ObservationMask& mask, std::span<const double> values,
                               const CovariateSet& beta)
    : scalar_(beta.dim() == 1), beta_(&beta) {
  if (values.size() != mask.size()) throw ConfigError("RowWindowIndex: values do not match mask");
  if (beta.size() != mask.cols()) throw ConfigError("RowWindowIndex: beta does not match mask");
  row_ptr_.assign(mask.rows() + 1, 0);
  key_.resize(mask.size());
  value_.resize(mask.size());
  col_.resize(mask.size());
  std::vector<std::size_t> order;
  for (std::size_t u = 0; u < mask.rows(); ++u) {
    const auto cols = mask.row_cols(u);
    const std::size_t base = mask.row_offset(u);
    row_ptr_[u + 1] = base + cols.size();
    order.resize(cols.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (scalar_)
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return beta[cols[a]][0] < beta[cols[b]][0]; });
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t src = order[k];
      col_[base + k] = cols[src];
      value_[base + k] = values[base + src];
      key_[base + k] = beta[cols[src]][0];
    }
  }
}

RowRegressionFit smooth_rows(const ObservationMask& mask, std::span<const double> values,
                             const CovariateSet& beta, double h, unsigned jobs) {
  if (!(h > 0.0)) throw ConfigError("bandwidth h must be > 0");
  const RowWindowIndex index(mask, values, beta);
  const auto n = static_cast<Eigen::Index>(mask.rows());
  const auto m = static_cast<Eigen::Index>(mask.cols());
  RowRegressionFit fit{Eigen::MatrixXd::Constant(n, m, std::numeric_limits<double>::quiet_NaN()),
                       Eigen::MatrixXi::Zero(n, m), h};
  const auto window = ColumnWindow::bandwidth(h);
  parallel_for(mask.rows(), jobs, [&](std::size_t u) {
    const auto row = static_cast<Eigen::Index>(u);
    for (Eigen::Index i = 0; i < m; ++i) {
      double sum = 0.0;
      int count = 0;
      index.visit(u, beta[static_cast<std::size_t>(i)], window, [&](double x, std::size_t) {
        sum += x;
        ++count;
      });
      fit.weights(row, i) = count;
      if (count > 0) fit.fhat(row, i) = sum / count;
    }
  });
  return fit;
}

RowRegressionFit fit_rows(const ObservedDataset& ds, double h, unsigned jobs) {
  return smooth_rows(ds.mask(), ds.values(), ds.col_covariates(), h, jobs);
}

double fallback_value(const ObservedDataset& ds, std::size_t u) {
  if (auto mean = ds.row_mean(u)) return *mean;
  return ds.global_mean();
}

DenseEstimate row_regression_baseline(const ObservedDataset& ds, double h, unsigned jobs) {
  const RowRegressionFit fit = fit_rows(ds, h, jobs);
  Eigen::MatrixXd est = fit.fhat;
  for (std::size_t u = 0; u < ds.rows(); ++u) {
    const double fb = fallback_value(ds, u);
    for (std::size_t i = 0; i < ds.cols(); ++i)
      if (!fit.defined(u, i)) est(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) = fb;
  }
  return DenseEstimate(std::move(est), "rowreg");
}

DenseEstimate oracle_regression(const ObservedDataset& ds, const CovariateSet& alpha, double h1,
                                double h2, unsigned jobs) {
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw ConfigError("oracle bandwidths must be > 0");
  if (alpha.size() != ds.rows()) throw ConfigError("oracle regression: alpha does not match rows");
  const RowWindowIndex index(ds.mask(), ds.values(), ds.col_covariates());
  const auto row_window = ColumnWindow::bandwidth(h1);
  const auto col_window = ColumnWindow::bandwidth(h2);
  const auto& beta = ds.col_covariates();
  Eigen::MatrixXd est(ds.rows(), ds.cols());
  parallel_for(ds.rows(), jobs, [&](std::size_t u) {
    std::vector<std::size_t> near_rows;
    for (std::size_t v = 0; v < ds.rows(); ++v)
      if (row_window.contains(alpha[u], alpha[v])) near_rows.push_back(v);
    const double fb = fallback_value(ds, u);
    for (std::size_t i = 0; i < ds.cols(); ++i) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t v : near_rows)
        index.visit(v, beta[i], col_window, [&](double x, std::size_t) {
          sum += x;
          ++count;
        });
      est(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) =
          count > 0 ? sum / static_cast<double>(count) : fb;
    }
  });
  return DenseEstimate(std::move(est), "oracle");
}

}  // namespace onesided
