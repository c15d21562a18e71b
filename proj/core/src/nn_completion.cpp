#include "onesided/nn_completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "onesided/error.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/parallel.hpp"

namespace onesided {

void NeighborhoodSpec::validate() const {
  if (!(eta2 >= 0.0)) throw ConfigError("eta2 must be >= 0");
  if (const auto* r = std::get_if<RadiusRule>(&row_rule)) {
    if (!(r->eta1 >= 0.0)) throw ConfigError("eta1 must be >= 0");
  } else if (std::get<KNearestRule>(row_rule).k < 1) {
    throw ConfigError("k must be >= 1");
  }
}

std::vector<std::size_t> rank_rows_by_distance(const RowDistanceMatrix& dists, std::size_t u) {
  std::vector<std::size_t> others;
  others.reserve(dists.size());
  for (std::size_t v = 0; v < dists.size(); ++v)
    if (v != u && dists.comparable(u, v)) others.push_back(v);
  std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
    const double da = dists(u, a), db = dists(u, b);
    return da != db ? da < db : a < b;
  });
  return others;
}

std::vector<std::size_t> build_row_neighborhood(const RowDistanceMatrix& dists, std::size_t u,
                                                const RowRule& rule) {
  if (u >= dists.size()) throw ConfigError("row index out of range");
  std::vector<std::size_t> out;
  if (const auto* radius = std::get_if<RadiusRule>(&rule)) {
    const double limit = radius->eta1 * radius->eta1;
    for (std::size_t v = 0; v < dists.size(); ++v)
      if (v == u || (dists.comparable(u, v) && dists(u, v) <= limit)) out.push_back(v);
    return out;
  }
  const std::size_t k = std::get<KNearestRule>(rule).k;
  out.push_back(u);
  const auto ranked = rank_rows_by_distance(dists, u);
  const std::size_t take = std::min(ranked.size(), k > 0 ? k - 1 : 0);
  out.insert(out.end(), ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

std::vector<std::size_t> build_col_neighborhood(const CovariateSet& beta, std::size_t i, double eta2) {
  if (i >= beta.size()) throw ConfigError("column index out of range");
  const auto window = ColumnWindow::radius(eta2);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (window.contains(beta[i], beta[j])) out.push_back(j);
  return out;
}

DenseEstimate nn_predict(const ObservedDataset& ds, const RowDistanceMatrix& dists,
                         const NeighborhoodSpec& spec, unsigned jobs) {
  spec.validate();
  if (dists.size() != ds.rows()) throw ConfigError("nn_predict: distance matrix does not cover all rows");
  const RowWindowIndex index(ds.mask(), ds.values(), ds.col_covariates());
  const auto window = ColumnWindow::radius(spec.eta2);
  const auto& beta = ds.col_covariates();
  Eigen::MatrixXd est(ds.rows(), ds.cols());
  parallel_for(ds.rows(), jobs, [&](std::size_t u) {
    const auto rows = build_row_neighborhood(dists, u, spec.row_rule);
    const double fb = fallback_value(ds, u);
    for (std::size_t i = 0; i < ds.cols(); ++i) {
      double sum = 0.0;
      std::size_t count = 0;
      auto add = [&](double x, std::size_t) {
        sum += x;
        ++count;
      };
      for (std::size_t v : rows) index.visit(v, beta[i], window, add);
      if (count == 0) index.visit(u, beta[i], window, add);
      est(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) =
          count > 0 ? sum / static_cast<double>(count) : fb;
    }
  });
  return DenseEstimate(std::move(est), "ours");
}

PipelineResult full_pipeline(const ObservedDataset& ds, const PipelineConfig& cfg) {
  cfg.neighborhoods.validate();
  const DatasetSplit parts = split_mask(ds, cfg.seed, cfg.split);
  const RowRegressionFit fit = fit_rows(*parts.distance_part, cfg.h, cfg.jobs);
  RowDistanceMatrix dists = estimate_distances(fit, parts.distance_part->sigma(), cfg.jobs);
  DenseEstimate est = nn_predict(*parts.prediction_part, dists, cfg.neighborhoods, cfg.jobs);
  return {std::move(est), std::move(dists)};
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::RowOnly: return "RowOnly";
    case Regime::OracleMatching: return "OracleMatching";
    case Regime::DistanceLimited: return "DistanceLimited";
  }
  return "unknown";
}

TheoryParams theory_params(std::size_t n, std::size_t m, double p, double lambda, double L,
                           std::size_t d1, std::size_t d2, double sigma) {
  if (n < 1 || m < 1 || d1 < 1 || d2 < 1) throw ConfigError("theory_params: sizes must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("theory_params: p must lie in (0, 1]");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("theory_params: lambda must lie in (0, 1]");
  if (!(L > 0.0)) throw ConfigError("theory_params: L must be > 0");
  if (!(sigma >= 0.0)) throw ConfigError("theory_params: sigma must be >= 0");

  const double rows = static_cast<double>(n);
  const double cols = static_cast<double>(m);
  const double dr = static_cast<double>(d1);
  const double dc = static_cast<double>(d2);
  const double mp = cols * p;

  TheoryParams out;
  out.lambda = lambda;
  out.L = L;
  const double row_only_limit = std::pow(mp, dr / (2 * lambda + dc));
  const double oracle_limit =
      std::pow(mp, std::min((2 * lambda + dr) / dc, (2 * dr + dc) / (4 * lambda + dc)));
  if (rows <= row_only_limit)
    out.regime = Regime::RowOnly;
  else if (rows <= oracle_limit)
    out.regime = Regime::OracleMatching;
  else
    out.regime = Regime::DistanceLimited;

  // log(mn) is floored at 1 so tiny problems do not divide by ~0.
  const double log_mn = std::max(1.0, std::log(rows * cols));
  const double h = std::pow(mp / log_mn, -std::min(1.0 / dc, 2.0 / (dc + 4 * lambda)));
  switch (out.regime) {
    case Regime::RowOnly:
      // Per-row regression: N1 = {u} and a column window matching the
      // minimax row bandwidth.
      out.h = std::pow(mp, -1.0 / (2 * lambda + dc));
      out.eta1 = 0.0;
      out.eta2 = out.h / 2;
      break;
    case Regime::OracleMatching:
      out.h = h;
      out.eta2 = std::pow(mp * rows, -1.0 / (2 * lambda + dr + dc));
      out.eta1 = std::pow(out.eta2, lambda);
      break;
    case Regime::DistanceLimited:
      // Delta = h^lambda under unit constants, so eta1 = 2 Delta, eta2 = h.
      out.h = h;
      out.eta1 = 2 * std::pow(h, lambda);
      out.eta2 = h;
      break;
  }
  return out;
}

}  // namespace onesided
