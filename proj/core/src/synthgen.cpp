#include "onesided/synthgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "onesided/error.hpp"

namespace onesided {

namespace {

double cube(double x) { return x * x * x; }

}  // namespace

double latent_f(LatentFunctionId id, std::span<const double> alpha, std::span<const double> beta) {
  if (id == LatentFunctionId::Custom) throw ConfigError("latent_f: custom functions need an evaluator");
  if (alpha.size() != 1 || beta.size() != 1)
    throw ConfigError("latent_f: F1-F3 are defined for d1 = d2 = 1");
  const double a = alpha[0];
  const double b = beta[0];
  switch (id) {
    case LatentFunctionId::F1:
      return std::sin(5 * a) * std::sin(5 * b) + 0.05 * cube(std::sin(25 * a) * std::sin(25 * b));
    case LatentFunctionId::F2:
      return std::sin(10 * a) * std::sin(4 * b) + 0.2 * cube(std::sin(40 * a) * std::sin(40 * b));
    case LatentFunctionId::F3:
      return std::sin(3 + 6 * a + 4 * b * b);
    case LatentFunctionId::Custom:
      break;
  }
  throw ConfigError("latent_f: unknown function id");
}

LatentFunction make_latent_function(LatentFunctionId id) {
  LatentFunction f;
  f.id = id;
  // L bounds |df/dalpha| + |df/dbeta| over the unit square.
  switch (id) {
    case LatentFunctionId::F1: f.smoothness = {1.0, 2 * (5 + 0.05 * 3 * 25)}; break;
    case LatentFunctionId::F2: f.smoothness = {1.0, (10 + 0.2 * 3 * 40) + (4 + 0.2 * 3 * 40)}; break;
    case LatentFunctionId::F3: f.smoothness = {1.0, 6 + 8}; break;
    case LatentFunctionId::Custom: throw ConfigError("custom latent functions are built by the caller");
  }
  return f;
}

double LatentFunction::operator()(std::span<const double> alpha, std::span<const double> beta) const {
  if (id == LatentFunctionId::Custom) {
    if (!custom) throw ConfigError("custom latent function has no evaluator");
    return custom(alpha, beta);
  }
  return latent_f(id, alpha, beta);
}

std::string to_string(LatentFunctionId id) {
  switch (id) {
    case LatentFunctionId::F1: return "F1";
    case LatentFunctionId::F2: return "F2";
    case LatentFunctionId::F3: return "F3";
    case LatentFunctionId::Custom: return "custom";
  }
  return "unknown";
}

LatentFunctionId parse_function_id(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "F1") return LatentFunctionId::F1;
  if (up == "F2") return LatentFunctionId::F2;
  if (up == "F3") return LatentFunctionId::F3;
  throw ConfigError("unknown function id '" + name + "' (expected F1, F2 or F3)");
}

void SynthConfig::validate() const {
  if (n < 1 || m < 1) throw ConfigError("n and m must be at least 1");
  if (d1 < 1 || d2 < 1) throw ConfigError("d1 and d2 must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
  if (function.id != LatentFunctionId::Custom && (d1 != 1 || d2 != 1))
    throw ConfigError(to_string(function.id) + " requires d1 = d2 = 1");
  if (function.id == LatentFunctionId::Custom && !function.custom)
    throw ConfigError("custom latent function has no evaluator");
}

Eigen::MatrixXd evaluate_truth(const LatentFunction& f, const CovariateSet& alpha,
                               const CovariateSet& beta) {
  Eigen::MatrixXd F(alpha.size(), beta.size());
  for (std::size_t u = 0; u < alpha.size(); ++u)
    for (std::size_t i = 0; i < beta.size(); ++i)
      F(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) = f(alpha[u], beta[i]);
  return F;
}

namespace {

CovariateSet draw_covariates(std::size_t count, std::size_t dim, const SeedSpec& seed) {
  RandomStream stream(seed);
  std::vector<double> values(count * dim);
  for (double& v : values) v = stream.uniform();
  return CovariateSet(count, dim, std::move(values));
}

}  // namespace

SyntheticInstance generate(const SynthConfig& cfg) {
  cfg.validate();
  CovariateSet alpha = draw_covariates(cfg.n, cfg.d1, cfg.seed.with_stage(Stage::RowCovariates));
  CovariateSet beta = draw_covariates(cfg.m, cfg.d2, cfg.seed.with_stage(Stage::ColCovariates));
  Eigen::MatrixXd F = evaluate_truth(cfg.function, alpha, beta);

  const RandomStream mask_root(cfg.seed.with_stage(Stage::Mask));
  const RandomStream noise_root(cfg.seed.with_stage(Stage::Noise));
  std::vector<Entry> entries;
  std::vector<double> values;
  entries.reserve(static_cast<std::size_t>(cfg.p * static_cast<double>(cfg.n * cfg.m) * 1.1) + 16);
  values.reserve(entries.capacity());
  for (std::size_t u = 0; u < cfg.n; ++u) {
    RandomStream mask_stream = mask_root.substream(u);
    RandomStream noise_stream = noise_root.substream(u);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      if (!mask_stream.bernoulli(cfg.p)) continue;
      entries.push_back({u, i});
      const double noise = cfg.sigma > 0.0 ? cfg.sigma * noise_stream.normal() : 0.0;
      values.push_back(F(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) + noise);
    }
  }
  ObservedDataset data(ObservationMask(cfg.n, cfg.m, std::move(entries)), std::move(values), beta,
                       cfg.sigma);
  return {GroundTruthInstance{cfg.function, std::move(alpha), std::move(beta), std::move(F)},
          std::move(data)};
}

}  // namespace onesided
