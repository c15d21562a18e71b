#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "onesided/data_model.hpp"
#include "onesided/random.hpp"

namespace onesided {

/// f1, f2, f3 of the synthetic benchmark; all three are defined on
/// [0,1] x [0,1]. Throws ConfigError for Custom or non-scalar arguments.
double latent_f(LatentFunctionId id, std::span<const double> alpha, std::span<const double> beta);

/// Latent function with its declared Holder parameters (lambda = 1, L from
/// bounds on the partial derivatives).
LatentFunction make_latent_function(LatentFunctionId id);

struct SynthConfig {
  std::size_t n = 200;
  std::size_t m = 500;
  std::size_t d1 = 1;
  std::size_t d2 = 1;
  double p = 0.05;
  double sigma = 0.2;
  LatentFunction function = make_latent_function(LatentFunctionId::F1);
  SeedSpec seed;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct SyntheticInstance {
  GroundTruthInstance truth;
  ObservedDataset data;
};

/// Draws alpha, beta uniformly, a Bernoulli(p) mask, and Gaussian noise on
/// the mask. Every quantity comes from its own stage stream; mask and noise
/// use one substream per row.
SyntheticInstance generate(const SynthConfig& cfg);

/// F_ui = f(alpha_u, beta_i).
Eigen::MatrixXd evaluate_truth(const LatentFunction& f, const CovariateSet& alpha,
                               const CovariateSet& beta);

}  // namespace onesided
