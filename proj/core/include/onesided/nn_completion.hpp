#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "onesided/data_model.hpp"
#include "onesided/random.hpp"
#include "onesided/row_distance.hpp"

namespace onesided {

/// N1(u) = {v : d-hat^2(u, v) <= eta1^2}.
struct RadiusRule {
  double eta1 = 0.0;
};
/// N1(u) = u plus its k - 1 nearest comparable rows (ties by lower index).
struct KNearestRule {
  std::size_t k = 1;
};
using RowRule = std::variant<RadiusRule, KNearestRule>;

struct NeighborhoodSpec {
  RowRule row_rule = KNearestRule{1};
  /// N2(i) = {j : ||beta_i - beta_j||_inf <= eta2}.
  double eta2 = 0.0;

  void validate() const;
};

/// Row neighborhood of u. Always contains u; incomparable rows never enter.
/// Radius rule: ascending row index. kNearest: u first, then by (dsq, index).
std::vector<std::size_t> build_row_neighborhood(const RowDistanceMatrix& dists, std::size_t u,
                                                const RowRule& rule);

/// All comparable rows other than u, ordered by (dsq, index).
std::vector<std::size_t> rank_rows_by_distance(const RowDistanceMatrix& dists, std::size_t u);

std::vector<std::size_t> build_col_neighborhood(const CovariateSet& beta, std::size_t i, double eta2);

/// Step 3: F-hat_ui is the mean of observed X over N1(u) x N2(i). Empty
/// intersections fall back to {u} x N2(i), then the row mean of u, then the
/// global mean.
DenseEstimate nn_predict(const ObservedDataset& ds, const RowDistanceMatrix& dists,
                         const NeighborhoodSpec& spec, unsigned jobs = 1);

struct PipelineConfig {
  double h = 0.1;
  NeighborhoodSpec neighborhoods;
  bool split = false;
  SeedSpec seed;
  unsigned jobs = 1;
};

struct PipelineResult {
  DenseEstimate estimate;
  RowDistanceMatrix distances;
};

/// split_mask, fit_rows on E', estimate_distances, nn_predict on E''.
PipelineResult full_pipeline(const ObservedDataset& ds, const PipelineConfig& cfg);

enum class Regime { RowOnly, OracleMatching, DistanceLimited };

const char* to_string(Regime regime);

/// Recommended tuning for a problem size, with every rate constant set to 1.
struct TheoryParams {
  double lambda = 1.0;
  double L = 1.0;
  Regime regime = Regime::DistanceLimited;
  /// Step-1 bandwidth; for RowOnly the per-row regression bandwidth.
  double h = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Side conditions on h and the neighborhoods are reported by the caller's
/// choice, not enforced here. Throws ConfigError on non-positive inputs or
/// lambda outside (0, 1].
TheoryParams theory_params(std::size_t n, std::size_t m, double p, double lambda, double L,
                           std::size_t d1, std::size_t d2, double sigma);

}  // namespace onesided
