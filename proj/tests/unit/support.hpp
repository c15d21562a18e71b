#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"
#include "onesided/synthgen.hpp"

namespace onesided::testing {

inline CovariateSet line(std::vector<double> points) {
  const std::size_t count = points.size();
  return CovariateSet(count, 1, std::move(points));
}

// Evenly spaced scalar covariates on [0,1].
inline CovariateSet grid_points(std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
  return line(std::move(v));
}

// Fully observed dataset holding the entries of X.
inline ObservedDataset full_dataset(const Eigen::MatrixXd& X, CovariateSet beta, double sigma) {
  std::vector<Observation> obs;
  for (Eigen::Index u = 0; u < X.rows(); ++u)
    for (Eigen::Index i = 0; i < X.cols(); ++i)
      obs.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(i), X(u, i)});
  return ObservedDataset::from_observations(static_cast<std::size_t>(X.rows()),
                                            static_cast<std::size_t>(X.cols()), std::move(obs),
                                            std::move(beta), sigma);
}

inline SynthConfig small_config(std::size_t n, std::size_t m, double p, double sigma,
                                LatentFunctionId f, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.p = p;
  cfg.sigma = sigma;
  cfg.function = make_latent_function(f);
  cfg.seed = SeedSpec{seed, 0, 0};
  return cfg;
}

inline bool bit_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double x = a.data()[k], y = b.data()[k];
    if (!(x == y || (x != x && y != y))) return false;
  }
  return true;
}

}  // namespace onesided::testing
