#include "onesided/row_distance.hpp"

#include <algorithm>
#include <vector>

#include "onesided/error.hpp"
#include "onesided/parallel.hpp"

namespace onesided {

double xi_correction(const RowRegressionFit& fit, const ObservationMask& mask,
                     const CovariateSet& beta, double sigma, std::size_t u, std::size_t v) {
  if (fit.rows() != mask.rows() || fit.cols() != mask.cols() || beta.size() != mask.cols())
    throw ConfigError("xi_correction: fit, mask and beta disagree in shape");
  std::vector<double> scaled(beta.dim());
  double total = 0.0;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < fit.cols(); ++i) {
    if (!fit.defined(u, i) || !fit.defined(v, i)) continue;
    ++valid;
    const double wu = fit.weights(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i));
    const double wv = fit.weights(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(i));
    for (std::size_t l = 0; l < fit.cols(); ++l) {
      for (std::size_t c = 0; c < beta.dim(); ++c) scaled[c] = (beta[l][c] - beta[i][c]) / fit.h;
      const double k = rect_kernel(scaled) ? 1.0 : 0.0;
      const double eu = mask.contains(u, l) ? 1.0 : 0.0;
      const double ev = mask.contains(v, l) ? 1.0 : 0.0;
      total += (eu / (wu * wu) + ev / (wv * wv)) * k * k;
    }
  }
  if (valid == 0) return 0.0;
  return sigma * sigma / static_cast<double>(valid) * total;
}

RowDistanceMatrix estimate_distances(const RowRegressionFit& fit, double sigma, unsigned jobs) {
  const std::size_t n = fit.rows();
  const std::size_t m = fit.cols();
  // Row-major copies so each row's estimates are contiguous.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor est(n, m);
  RowMajor inv_w(n, m);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = static_cast<Eigen::Index>(u), c = static_cast<Eigen::Index>(i);
      const int w = fit.weights(r, c);
      est(r, c) = w > 0 ? fit.fhat(r, c) : 0.0;
      inv_w(r, c) = w > 0 ? 1.0 / w : 0.0;
    }

  RowDistanceMatrix out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXi::Zero(n, n)};
  const double var = sigma * sigma;
  constexpr std::size_t kTile = 32;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  // Upper-triangle tiles (a, b) with a <= b, enumerated in a fixed order.
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t a = 0; a < tiles; ++a)
    for (std::size_t b = a; b < tiles; ++b) work.emplace_back(a, b);

  parallel_for(work.size(), jobs, [&](std::size_t t) {
    const auto [ta, tb] = work[t];
    for (std::size_t u = ta * kTile; u < std::min(n, (ta + 1) * kTile); ++u) {
      const double* eu = est.row(static_cast<Eigen::Index>(u)).data();
      const double* wu = inv_w.row(static_cast<Eigen::Index>(u)).data();
      for (std::size_t v = std::max(u + 1, tb * kTile); v < std::min(n, (tb + 1) * kTile); ++v) {
        const double* ev = est.row(static_cast<Eigen::Index>(v)).data();
        const double* wv = inv_w.row(static_cast<Eigen::Index>(v)).data();
        double sq = 0.0, xi = 0.0;
        int valid = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (wu[i] == 0.0 || wv[i] == 0.0) continue;
          const double diff = eu[i] - ev[i];
          sq += diff * diff;
          xi += wu[i] + wv[i];
          ++valid;
        }
        double d = 0.0;
        if (valid > 0) d = sq / valid - var * xi / valid;
        const auto r = static_cast<Eigen::Index>(u), c = static_cast<Eigen::Index>(v);
        out.dsq(r, c) = out.dsq(c, r) = d;
        out.valid_cols(r, c) = out.valid_cols(c, r) = valid;
      }
    }
  });
  return out;
}

RowRegressionFit oracle_smoothed_fit(const GroundTruthInstance& truth, const ObservationMask& mask,
                                     double h) {
  if (truth.rows() != mask.rows() || truth.cols() != mask.cols())
    throw ConfigError("oracle_smoothed_fit: truth and mask disagree in shape");
  std::vector<double> clean;
  clean.reserve(mask.size());
  for (const auto& e : mask.entries())
    clean.push_back(truth.F(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)));
  return smooth_rows(mask, clean, truth.col_covariates, h);
}

double smoothed_distance_sq(const RowRegressionFit& smoothed, std::size_t u, std::size_t v) {
  if (u == v) return 0.0;
  double sq = 0.0;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < smoothed.cols(); ++i) {
    if (!smoothed.defined(u, i) || !smoothed.defined(v, i)) continue;
    const double diff = smoothed.fhat(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) -
                        smoothed.fhat(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(i));
    sq += diff * diff;
    ++valid;
  }
  return valid == 0 ? 0.0 : sq / static_cast<double>(valid);
}

double oracle_smoothed_distance_sq(const GroundTruthInstance& truth, const ObservationMask& mask,
                                   double h, std::size_t u, std::size_t v) {
  return smoothed_distance_sq(oracle_smoothed_fit(truth, mask, h), u, v);
}

double true_distance_sq(const GroundTruthInstance& truth, std::size_t u, std::size_t v) {
  const auto diff = truth.F.row(static_cast<Eigen::Index>(u)) - truth.F.row(static_cast<Eigen::Index>(v));
  return diff.squaredNorm() / static_cast<double>(truth.cols());
}

}  // namespace onesided
