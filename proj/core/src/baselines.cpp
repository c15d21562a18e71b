#include "onesided/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "onesided/error.hpp"

namespace onesided {

namespace {

using Index = Eigen::Index;

// Column-side view of the mask: for every column the observing rows and values.
struct ColumnMajorObs {
  std::vector<std::size_t> ptr;
  std::vector<std::size_t> rows;
  std::vector<double> values;
};

ColumnMajorObs by_column(const ObservedDataset& ds) {
  ColumnMajorObs out;
  out.ptr.assign(ds.cols() + 1, 0);
  for (const auto& e : ds.mask().entries()) ++out.ptr[e.col + 1];
  for (std::size_t i = 0; i < ds.cols(); ++i) out.ptr[i + 1] += out.ptr[i];
  out.rows.resize(ds.mask().size());
  out.values.resize(ds.mask().size());
  std::vector<std::size_t> fill(out.ptr.begin(), out.ptr.end() - 1);
  for (const auto& o : ds.observations()) {
    const std::size_t k = fill[o.col]++;
    out.rows[k] = o.row;
    out.values[k] = o.value;
  }
  return out;
}

double als_objective(const ObservedDataset& ds, const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                     double ridge) {
  double loss = 0.0;
  for (const auto& o : ds.observations()) {
    const double r = o.value - U.row(static_cast<Index>(o.row)).dot(V.row(static_cast<Index>(o.col)));
    loss += r * r;
  }
  return loss + ridge * (U.squaredNorm() + V.squaredNorm());
}

// Solves each target row of `out` against the fixed factor `other`.
template <class Rows>
void ridge_half_sweep(Eigen::MatrixXd& out, const Eigen::MatrixXd& other, double ridge, Rows&& rows_of) {
  const Index r = out.cols();
  const double floor_ridge = std::max(ridge, 1e-10);
  Eigen::MatrixXd gram(r, r);
  Eigen::VectorXd rhs(r);
  for (Index t = 0; t < out.rows(); ++t) {
    gram.setZero();
    rhs.setZero();
    rows_of(static_cast<std::size_t>(t), [&](std::size_t s, double x) {
      const auto f = other.row(static_cast<Index>(s));
      gram.noalias() += f.transpose() * f;
      rhs.noalias() += x * f.transpose();
    });
    gram.diagonal().array() += floor_ridge;
    out.row(t) = gram.ldlt().solve(rhs).transpose();
  }
}

}  // namespace

DenseEstimate als_fit(const ObservedDataset& ds, const AlsConfig& cfg, std::vector<double>* trace) {
  if (cfg.rank < 1 || cfg.rank > std::min(ds.rows(), ds.cols()))
    throw ConfigError("ALS rank must lie in [1, min(n, m)]");
  if (!(cfg.ridge >= 0.0)) throw ConfigError("ALS ridge must be >= 0");
  const auto n = static_cast<Index>(ds.rows());
  const auto m = static_cast<Index>(ds.cols());
  const auto r = static_cast<Index>(cfg.rank);

  RandomStream init(cfg.seed.with_stage(Stage::AlsInit));
  Eigen::MatrixXd U(n, r), V(m, r);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < r; ++b) U(a, b) = 0.02 * init.uniform() - 0.01;
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < r; ++b) V(a, b) = 0.02 * init.uniform() - 0.01;

  const ColumnMajorObs cols = by_column(ds);
  auto row_obs = [&](std::size_t u, auto&& fn) {
    const auto c = ds.mask().row_cols(u);
    const auto x = ds.row_values(u);
    for (std::size_t k = 0; k < c.size(); ++k) fn(c[k], x[k]);
  };
  auto col_obs = [&](std::size_t i, auto&& fn) {
    for (std::size_t k = cols.ptr[i]; k < cols.ptr[i + 1]; ++k) fn(cols.rows[k], cols.values[k]);
  };

  double prev = als_objective(ds, U, V, cfg.ridge);
  if (trace) trace->push_back(prev);
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    ridge_half_sweep(U, V, cfg.ridge, row_obs);
    if (trace) trace->push_back(als_objective(ds, U, V, cfg.ridge));
    ridge_half_sweep(V, U, cfg.ridge, col_obs);
    const double cur = als_objective(ds, U, V, cfg.ridge);
    if (trace) trace->push_back(cur);
    const double change = std::fabs(prev - cur) / std::max(prev, 1e-300);
    prev = cur;
    if (change < cfg.tol) break;
  }
  return DenseEstimate(U * V.transpose(), "als");
}

void SoftImputeConfig::validate() const {
  if (lambda_grid.empty()) throw ConfigError("SoftImpute lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] >= 0.0)) throw ConfigError("SoftImpute lambdas must be >= 0");
    if (k > 0 && !(lambda_grid[k] < lambda_grid[k - 1]))
      throw ConfigError("SoftImpute lambda grid must be strictly descending");
  }
  if (max_iters < 1) throw ConfigError("SoftImpute max_iters must be >= 1");
}

namespace {

Eigen::MatrixXd observed_matrix(const ObservedDataset& ds) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Index>(ds.rows()), static_cast<Index>(ds.cols()));
  for (const auto& o : ds.observations()) X(static_cast<Index>(o.row), static_cast<Index>(o.col)) = o.value;
  return X;
}

}  // namespace

std::vector<double> default_lambda_grid(const ObservedDataset& ds, std::size_t points) {
  const Eigen::MatrixXd X = observed_matrix(ds);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(X);
  const double top = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  std::vector<double> grid;
  if (top <= 0.0) return {0.0};
  for (std::size_t k = 0; k < points; ++k) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    grid.push_back(top * std::pow(1e-3, frac));
  }
  return grid;
}

SoftImputeConfig default_softimpute_config(const ObservedDataset& ds) {
  SoftImputeConfig cfg;
  cfg.lambda_grid = default_lambda_grid(ds);
  return cfg;
}

Eigen::MatrixXd soft_threshold_svd(const Eigen::MatrixXd& matrix, double lambda, std::size_t rank_cap,
                                   double* nuclear_norm) {
  const auto full = static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols()));
  const std::size_t cap = rank_cap == 0 ? full : std::min(rank_cap, full);
  if (lambda == 0.0 && cap == full && !nuclear_norm) return matrix;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Index keep = 0;
  while (keep < static_cast<Index>(cap) && keep < s.size() && s(keep) > lambda) ++keep;
  const Eigen::VectorXd shrunk = (s.head(keep).array() - lambda).matrix();
  if (nuclear_norm) *nuclear_norm = shrunk.sum();
  if (lambda == 0.0 && cap == full) return matrix;
  return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() * svd.matrixV().leftCols(keep).transpose();
}

void softimpute_path(const ObservedDataset& ds, const SoftImputeConfig& cfg,
                     const SoftImputeVisitor& visit, std::vector<double>* trace) {
  cfg.validate();
  const Eigen::MatrixXd X = observed_matrix(ds);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(X.rows(), X.cols());
  const auto entries = ds.mask().entries();
  auto fill_observed = [&](Eigen::MatrixXd& target) {
    for (const auto& e : entries)
      target(static_cast<Index>(e.row), static_cast<Index>(e.col)) =
          X(static_cast<Index>(e.row), static_cast<Index>(e.col));
  };
  auto objective = [&](const Eigen::MatrixXd& z, double lambda, double nuclear) {
    double loss = 0.0;
    for (const auto& e : entries) {
      const double r = X(static_cast<Index>(e.row), static_cast<Index>(e.col)) -
                       z(static_cast<Index>(e.row), static_cast<Index>(e.col));
      loss += r * r;
    }
    return 0.5 * loss + lambda * nuclear;
  };

  Eigen::MatrixXd filled(X.rows(), X.cols());
  for (std::size_t g = 0; g < cfg.lambda_grid.size(); ++g) {
    const double lambda = cfg.lambda_grid[g];
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
      filled = Z;
      fill_observed(filled);
      double nuclear = 0.0;
      Eigen::MatrixXd next = soft_threshold_svd(filled, lambda, cfg.rank_cap, trace ? &nuclear : nullptr);
      if (trace) trace->push_back(objective(next, lambda, nuclear));
      const double denom = std::max(Z.squaredNorm(), 1e-300);
      const double change = (next - Z).squaredNorm() / denom;
      Z = std::move(next);
      if (change < cfg.tol) break;
    }
    if (visit) visit(g, lambda, Z);
  }
}

DenseEstimate softimpute_fit(const ObservedDataset& ds, const SoftImputeConfig& cfg,
                             std::vector<double>* trace) {
  Eigen::MatrixXd last;
  softimpute_path(ds, cfg, [&](std::size_t, double, const Eigen::MatrixXd& z) { last = z; }, trace);
  return DenseEstimate(std::move(last), "softimpute");
}

}  // namespace onesided
