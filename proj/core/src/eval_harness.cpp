#include "onesided/eval_harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>

#include "onesided/baselines.hpp"
#include "onesided/error.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/nn_completion.hpp"
#include "onesided/parallel.hpp"
#include "onesided/row_distance.hpp"

namespace onesided {

using Index = Eigen::Index;

double mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw ConfigError("mse: estimate is " + std::to_string(estimate.rows()) + "x" +
                      std::to_string(estimate.cols()) + " but truth is " + std::to_string(truth.rows()) +
                      "x" + std::to_string(truth.cols()));
  if (truth.size() == 0) return 0.0;
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

double mse(const DenseEstimate& estimate, const GroundTruthInstance& truth) {
  return mse(estimate.values, truth.F);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Ours: return "ours";
    case Method::RowRegression: return "rowreg";
    case Method::Oracle: return "oracle";
    case Method::Als: return "als";
    case Method::SoftImpute: return "softimpute";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods())
    if (to_string(m) == name) return m;
  throw ConfigError("unknown method '" + name + "' (expected ours, rowreg, oracle, als or softimpute)");
}

std::vector<Method> all_methods() {
  return {Method::Ours, Method::RowRegression, Method::Oracle, Method::Als, Method::SoftImpute};
}

std::string to_string(TuneObjective objective) {
  return objective == TuneObjective::Oracle ? "oracle" : "validation";
}

TuneObjective parse_objective(const std::string& name) {
  if (name == "oracle") return TuneObjective::Oracle;
  if (name == "validation") return TuneObjective::Validation;
  throw ConfigError("unknown objective '" + name + "' (expected oracle or validation)");
}

GridSpec GridSpec::defaults() {
  GridSpec g;
  for (int s = 1; s <= 40; ++s) g.h_grid.push_back(0.005 * s);
  g.eta2_grid = g.h_grid;
  for (std::size_t k = 1; k <= 50; ++k) g.k_grid.push_back(k);
  g.ridge_grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
  return g;
}

void GridSpec::validate() const {
  auto positive = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw ConfigError(std::string(name) + " grid is empty");
    for (double x : grid)
      if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(name) + " grid values must be > 0");
  };
  positive(h_grid, "h");
  positive(eta2_grid, "eta2");
  positive(ridge_grid, "ridge");
  if (k_grid.empty()) throw ConfigError("k grid is empty");
  for (std::size_t k : k_grid)
    if (k < 1) throw ConfigError("k grid values must be >= 1");
  if (als_rank < 1) throw ConfigError("ALS rank must be >= 1");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw ConfigError("valFraction must lie in (0, 1)");
}

namespace {

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

__extension__ using u128 = unsigned __int128;

std::size_t uniform_index(RandomStream& stream, std::size_t bound) {
  return static_cast<std::size_t>((static_cast<u128>(stream.next_u64()) * bound) >> 64);
}

struct Target {
  std::size_t u;
  std::size_t i;
  double value;
};

// Fitting data plus the entries a candidate is scored on.
struct TuneContext {
  ObservedDataset train;
  std::vector<Target> targets;
  std::vector<std::vector<std::size_t>> targets_by_row;
};

TuneContext make_context(const ObservedDataset& ds, const GroundTruthInstance* truth,
                         const GridSpec& grid, const SeedSpec& seed) {
  TuneContext ctx;
  if (grid.objective == TuneObjective::Oracle) {
    if (!truth) throw ConfigError("oracle tuning needs the ground truth");
    if (truth->rows() != ds.rows() || truth->cols() != ds.cols())
      throw ConfigError("ground truth does not match the dataset shape");
    ctx.train = ds;
    for (std::size_t u = 0; u < ds.rows(); ++u)
      for (std::size_t i = 0; i < ds.cols(); ++i)
        ctx.targets.push_back({u, i, truth->F(static_cast<Index>(u), static_cast<Index>(i))});
  } else {
    auto [train, held] = holdout_split(ds, grid.val_fraction, seed);
    ctx.train = std::move(train);
    for (const auto& o : held.observations()) ctx.targets.push_back({o.row, o.col, o.value});
  }
  ctx.targets_by_row.resize(ds.rows());
  for (std::size_t t = 0; t < ctx.targets.size(); ++t) ctx.targets_by_row[ctx.targets[t].u].push_back(t);
  return ctx;
}

double score_estimate(const TuneContext& ctx, const Eigen::MatrixXd& est) {
  double err = 0.0;
  for (const auto& t : ctx.targets) {
    const double d = est(static_cast<Index>(t.u), static_cast<Index>(t.i)) - t.value;
    err += d * d;
  }
  return ctx.targets.empty() ? 0.0 : err / static_cast<double>(ctx.targets.size());
}

// First grid index whose bandwidth window admits a max-norm gap.
std::size_t first_bandwidth(const std::vector<double>& hs, double gap) {
  return static_cast<std::size_t>(
      std::partition_point(hs.begin(), hs.end(), [gap](double h) { return gap / h > 0.5; }) - hs.begin());
}

ChosenParams tune_ours(const TuneContext& ctx, const GridSpec& grid, unsigned jobs) {
  const auto hs = sorted_unique(grid.h_grid);
  const auto etas = sorted_unique(grid.eta2_grid);
  const auto ks = sorted_unique(grid.k_grid);
  const std::size_t G = etas.size(), K = ks.size();
  const std::size_t k_max = ks.back();
  const auto& train = ctx.train;
  const auto& beta = train.col_covariates();
  std::vector<double> err(hs.size() * G * K, 0.0);

  parallel_for(hs.size(), jobs, [&](std::size_t hi) {
    const RowRegressionFit fit = fit_rows(train, hs[hi]);
    const RowDistanceMatrix dists = estimate_distances(fit, train.sigma());
    double* slice = err.data() + hi * G * K;
    std::vector<double> bucket_sum(G);
    std::vector<std::size_t> bucket_cnt(G);
    for (std::size_t u = 0; u < train.rows(); ++u) {
      if (ctx.targets_by_row[u].empty()) continue;
      std::vector<std::size_t> nbrs{u};
      const auto ranked = rank_rows_by_distance(dists, u);
      nbrs.insert(nbrs.end(), ranked.begin(),
                  ranked.begin() + static_cast<std::ptrdiff_t>(std::min(ranked.size(), k_max - 1)));
      const double fb = fallback_value(train, u);
      for (std::size_t t : ctx.targets_by_row[u]) {
        const Target& target = ctx.targets[t];
        std::fill(bucket_sum.begin(), bucket_sum.end(), 0.0);
        std::fill(bucket_cnt.begin(), bucket_cnt.end(), 0);
        auto emit = [&](std::size_t kp) {
          double cs = 0.0;
          std::size_t cc = 0;
          for (std::size_t g = 0; g < G; ++g) {
            cs += bucket_sum[g];
            cc += bucket_cnt[g];
            const double pred = cc > 0 ? cs / static_cast<double>(cc) : fb;
            const double d = pred - target.value;
            slice[g * K + kp] += d * d;
          }
        };
        std::size_t kp = 0;
        for (std::size_t r = 0; r < nbrs.size() && kp < K; ++r) {
          const std::size_t v = nbrs[r];
          const auto cols = train.mask().row_cols(v);
          const auto vals = train.row_values(v);
          for (std::size_t e = 0; e < cols.size(); ++e) {
            const double gap = max_norm_distance(beta[target.i], beta[cols[e]]);
            const auto g = static_cast<std::size_t>(std::lower_bound(etas.begin(), etas.end(), gap) - etas.begin());
            if (g < G) {
              bucket_sum[g] += vals[e];
              ++bucket_cnt[g];
            }
          }
          while (kp < K && ks[kp] == r + 1) emit(kp++);
        }
        // k beyond the comparable rows: the whole list is the neighborhood.
        while (kp < K) emit(kp++);
      }
    }
  });

  ChosenParams best;
  best.method = Method::Ours;
  best.score = std::numeric_limits<double>::infinity();
  const double norm = ctx.targets.empty() ? 1.0 : static_cast<double>(ctx.targets.size());
  for (std::size_t hi = 0; hi < hs.size(); ++hi)
    for (std::size_t g = 0; g < G; ++g)
      for (std::size_t kp = 0; kp < K; ++kp) {
        const double s = err[(hi * G + g) * K + kp] / norm;
        if (s < best.score) {
          best.score = s;
          best.h = hs[hi];
          best.eta2 = etas[g];
          best.k = ks[kp];
        }
      }
  return best;
}

ChosenParams tune_rowreg(const TuneContext& ctx, const GridSpec& grid, unsigned jobs) {
  const auto hs = sorted_unique(grid.h_grid);
  std::vector<double> scores(hs.size());
  parallel_for(hs.size(), jobs, [&](std::size_t hi) {
    const RowRegressionFit fit = fit_rows(ctx.train, hs[hi]);
    double err = 0.0;
    for (const auto& t : ctx.targets) {
      const double pred = fit.defined(t.u, t.i)
                              ? fit.fhat(static_cast<Index>(t.u), static_cast<Index>(t.i))
                              : fallback_value(ctx.train, t.u);
      err += (pred - t.value) * (pred - t.value);
    }
    scores[hi] = ctx.targets.empty() ? 0.0 : err / static_cast<double>(ctx.targets.size());
  });
  ChosenParams best;
  best.method = Method::RowRegression;
  best.score = std::numeric_limits<double>::infinity();
  for (std::size_t hi = 0; hi < hs.size(); ++hi)
    if (scores[hi] < best.score) {
      best.score = scores[hi];
      best.h = hs[hi];
    }
  return best;
}

ChosenParams tune_oracle(const TuneContext& ctx, const GroundTruthInstance& truth, const GridSpec& grid,
                         unsigned jobs) {
  const auto hs = sorted_unique(grid.h_grid);
  const std::size_t H = hs.size();
  const auto& train = ctx.train;
  const auto& alpha = truth.row_covariates;
  const auto& beta = train.col_covariates();
  // err[row bandwidth][column bandwidth] per target row, merged in row order.
  std::vector<std::vector<double>> per_row(train.rows());
  parallel_for(train.rows(), jobs, [&](std::size_t u) {
    if (ctx.targets_by_row[u].empty()) return;
    std::vector<double> sum(H * H);
    std::vector<std::size_t> cnt(H * H);
    auto& err = per_row[u];
    err.assign(H * H, 0.0);
    const double fb = fallback_value(train, u);
    for (std::size_t t : ctx.targets_by_row[u]) {
      const Target& target = ctx.targets[t];
      std::fill(sum.begin(), sum.end(), 0.0);
      std::fill(cnt.begin(), cnt.end(), 0);
      for (std::size_t v = 0; v < train.rows(); ++v) {
        const std::size_t g1 = first_bandwidth(hs, max_norm_distance(alpha[u], alpha[v]));
        if (g1 == H) continue;
        const auto cols = train.mask().row_cols(v);
        const auto vals = train.row_values(v);
        for (std::size_t e = 0; e < cols.size(); ++e) {
          const std::size_t g2 = first_bandwidth(hs, max_norm_distance(beta[target.i], beta[cols[e]]));
          if (g2 == H) continue;
          sum[g1 * H + g2] += vals[e];
          ++cnt[g1 * H + g2];
        }
      }
      // Two-dimensional prefix sums turn buckets into window totals.
      for (std::size_t a = 0; a < H; ++a) {
        double row_s = 0.0;
        std::size_t row_c = 0;
        for (std::size_t b = 0; b < H; ++b) {
          row_s += sum[a * H + b];
          row_c += cnt[a * H + b];
          sum[a * H + b] = row_s + (a > 0 ? sum[(a - 1) * H + b] : 0.0);
          cnt[a * H + b] = row_c + (a > 0 ? cnt[(a - 1) * H + b] : 0);
          const double pred = cnt[a * H + b] > 0 ? sum[a * H + b] / static_cast<double>(cnt[a * H + b]) : fb;
          err[a * H + b] += (pred - target.value) * (pred - target.value);
        }
      }
    }
  });
  std::vector<double> err(H * H, 0.0);
  for (const auto& p : per_row)
    for (std::size_t k = 0; k < p.size(); ++k) err[k] += p[k];

  ChosenParams best;
  best.method = Method::Oracle;
  best.score = std::numeric_limits<double>::infinity();
  const double norm = ctx.targets.empty() ? 1.0 : static_cast<double>(ctx.targets.size());
  for (std::size_t a = 0; a < H; ++a)
    for (std::size_t b = 0; b < H; ++b)
      if (err[a * H + b] / norm < best.score) {
        best.score = err[a * H + b] / norm;
        best.h_row = hs[a];
        best.h = hs[b];
      }
  return best;
}

ChosenParams tune_als(const TuneContext& ctx, const GridSpec& grid, const SeedSpec& seed, unsigned jobs) {
  const auto ridges = sorted_unique(grid.ridge_grid);
  std::vector<double> scores(ridges.size());
  parallel_for(ridges.size(), jobs, [&](std::size_t r) {
    AlsConfig cfg;
    cfg.rank = grid.als_rank;
    cfg.ridge = ridges[r];
    cfg.seed = seed;
    scores[r] = score_estimate(ctx, als_fit(ctx.train, cfg).values);
  });
  ChosenParams best;
  best.method = Method::Als;
  best.score = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < ridges.size(); ++r)
    if (scores[r] < best.score) {
      best.score = scores[r];
      best.ridge = ridges[r];
    }
  return best;
}

ChosenParams tune_softimpute(const TuneContext& ctx) {
  const SoftImputeConfig cfg = default_softimpute_config(ctx.train);
  std::vector<double> scores(cfg.lambda_grid.size());
  softimpute_path(ctx.train, cfg, [&](std::size_t g, double, const Eigen::MatrixXd& z) {
    scores[g] = score_estimate(ctx, z);
  });
  ChosenParams best;
  best.method = Method::SoftImpute;
  best.score = std::numeric_limits<double>::infinity();
  // Ascending lambda so ties favour the smaller value.
  for (std::size_t g = cfg.lambda_grid.size(); g-- > 0;)
    if (scores[g] < best.score) {
      best.score = scores[g];
      best.lambda = cfg.lambda_grid[g];
    }
  return best;
}

const GroundTruthInstance& require_alpha(const ObservedDataset& ds, const GroundTruthInstance* truth) {
  if (!truth || truth->row_covariates.size() != ds.rows())
    throw ConfigError("oracle regression needs the row covariates (alpha)");
  return *truth;
}

}  // namespace

std::pair<ObservedDataset, ObservedDataset> holdout_split(const ObservedDataset& ds, double fraction,
                                                          const SeedSpec& seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("validation fraction must lie in (0, 1)");
  const std::size_t total = ds.mask().size();
  const auto held_count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream stream(seed.with_stage(Stage::Validation));
  for (std::size_t k = 0; k < held_count; ++k)
    std::swap(order[k], order[k + uniform_index(stream, total - k)]);
  std::vector<bool> keep(total, true);
  for (std::size_t k = 0; k < held_count; ++k) keep[order[k]] = false;
  std::vector<bool> held(total);
  for (std::size_t k = 0; k < total; ++k) held[k] = !keep[k];
  return {subset(ds, keep), subset(ds, held)};
}

ChosenParams tune(const ObservedDataset& ds, const GroundTruthInstance* truth, Method method,
                  const GridSpec& grid, const SeedSpec& seed, unsigned jobs) {
  grid.validate();
  if (method == Method::Oracle) require_alpha(ds, truth);
  const TuneContext ctx = make_context(ds, truth, grid, seed);
  switch (method) {
    case Method::Ours: return tune_ours(ctx, grid, jobs);
    case Method::RowRegression: return tune_rowreg(ctx, grid, jobs);
    case Method::Oracle: return tune_oracle(ctx, *truth, grid, jobs);
    case Method::Als: return tune_als(ctx, grid, seed, jobs);
    case Method::SoftImpute: return tune_softimpute(ctx);
  }
  throw ConfigError("unknown method");
}

DenseEstimate fit_with_params(const ObservedDataset& ds, const GroundTruthInstance* truth,
                              const ChosenParams& params, const SeedSpec& seed, std::size_t als_rank,
                              unsigned jobs) {
  auto need = [&](const auto& field, const char* name) {
    if (!field) throw ConfigError(to_string(params.method) + " needs parameter '" + name + "'");
    return *field;
  };
  switch (params.method) {
    case Method::Ours: {
      PipelineConfig cfg;
      cfg.h = need(params.h, "h");
      cfg.neighborhoods.eta2 = need(params.eta2, "eta2");
      if (params.k)
        cfg.neighborhoods.row_rule = KNearestRule{*params.k};
      else
        cfg.neighborhoods.row_rule = RadiusRule{need(params.eta1, "k or eta1")};
      cfg.seed = seed;
      cfg.jobs = jobs;
      return full_pipeline(ds, cfg).estimate;
    }
    case Method::RowRegression:
      return row_regression_baseline(ds, need(params.h, "h"), jobs);
    case Method::Oracle:
      return oracle_regression(ds, require_alpha(ds, truth).row_covariates, need(params.h_row, "h_row"),
                               need(params.h, "h"), jobs);
    case Method::Als: {
      AlsConfig cfg;
      cfg.rank = als_rank;
      cfg.ridge = need(params.ridge, "ridge");
      cfg.seed = seed;
      return als_fit(ds, cfg);
    }
    case Method::SoftImpute: {
      const double lambda = need(params.lambda, "lambda");
      SoftImputeConfig cfg;
      for (double g : default_lambda_grid(ds))
        if (g > lambda) cfg.lambda_grid.push_back(g);
      cfg.lambda_grid.push_back(lambda);
      return softimpute_fit(ds, cfg);
    }
  }
  throw ConfigError("unknown method");
}

SeedSpec cell_seed(const SeedSpec& base, std::uint64_t axis_key, std::size_t trial) {
  return SeedSpec{mix64(base.master ^ mix64(axis_key)), trial, 0};
}

std::vector<ExperimentRecord> run_cell(const SynthConfig& cfg, const std::vector<Method>& methods,
                                       const GridSpec& grid, std::size_t trial, unsigned jobs) {
  const SyntheticInstance inst = generate(cfg);
  const std::uint64_t hash = inst.data.content_hash();
  std::vector<ExperimentRecord> out;
  for (Method method : methods) {
    const ChosenParams params = tune(inst.data, &inst.truth, method, grid, cfg.seed, jobs);
    const auto start = std::chrono::steady_clock::now();
    const DenseEstimate est = fit_with_params(inst.data, &inst.truth, params, cfg.seed, grid.als_rank, jobs);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ExperimentRecord rec;
    rec.trial = trial;
    rec.method = method;
    rec.n = cfg.n;
    rec.m = cfg.m;
    rec.p = cfg.p;
    rec.sigma = cfg.sigma;
    rec.function = to_string(cfg.function.id);
    rec.params = params;
    rec.mse = mse(est, inst.truth);
    rec.seconds = seconds;
    rec.dataset_hash = hash;
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

std::uint64_t bits_of(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

template <class Cells>
ExperimentResult run_cells(const Cells& cells, const std::vector<Method>& methods, const GridSpec& grid,
                           std::size_t trials, unsigned jobs) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (methods.empty()) throw ConfigError("no methods selected");
  grid.validate();
  std::vector<std::vector<ExperimentRecord>> per_cell(cells.size() * trials);
  // Parallelism is spent on cells; each cell runs single-threaded.
  const unsigned outer = resolve_jobs(jobs);
  parallel_for(per_cell.size(), outer, [&](std::size_t c) {
    const std::size_t axis = c / trials;
    const std::size_t trial = c % trials;
    SynthConfig cfg = cells[axis].first;
    cfg.seed = cell_seed(cfg.seed, cells[axis].second, trial);
    per_cell[c] = run_cell(cfg, methods, grid, trial, per_cell.size() >= outer ? 1 : jobs);
  });
  ExperimentResult result;
  result.objective = grid.objective;
  for (auto& recs : per_cell)
    for (auto& r : recs) result.records.push_back(std::move(r));
  return result;
}

}  // namespace

ExperimentResult sweep_n(const SynthConfig& base, const std::vector<std::size_t>& n_list,
                         const std::vector<Method>& methods, const GridSpec& grid, std::size_t trials,
                         unsigned jobs) {
  std::vector<std::pair<SynthConfig, std::uint64_t>> cells;
  for (std::size_t n : n_list) {
    SynthConfig cfg = base;
    cfg.n = n;
    cfg.validate();
    cells.emplace_back(cfg, static_cast<std::uint64_t>(n));
  }
  return run_cells(cells, methods, grid, trials, jobs);
}

ExperimentResult sweep_p(const SynthConfig& base, const std::vector<double>& p_list,
                         const std::vector<Method>& methods, const GridSpec& grid, std::size_t trials,
                         unsigned jobs) {
  std::vector<std::pair<SynthConfig, std::uint64_t>> cells;
  for (double p : p_list) {
    SynthConfig cfg = base;
    cfg.p = p;
    cfg.validate();
    cells.emplace_back(cfg, bits_of(p));
  }
  return run_cells(cells, methods, grid, trials, jobs);
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> samples;
  for (const auto& r : result.records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) {
      return s.method == r.method && s.n == r.n && s.m == r.m && s.p == r.p && s.sigma == r.sigma &&
             s.function == r.function;
    });
    if (it == rows.end()) {
      rows.push_back({r.method, r.n, r.m, r.p, r.sigma, r.function, 0.0, 0.0, 0});
      samples.emplace_back();
      it = rows.end() - 1;
    }
    samples[static_cast<std::size_t>(it - rows.begin())].push_back(r.mse);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& s = samples[k];
    double sum = 0.0;
    for (double x : s) sum += x;
    const double mean = sum / static_cast<double>(s.size());
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    rows[k].mse_mean = mean;
    rows[k].mse_std = s.size() > 1 ? std::sqrt(ss / static_cast<double>(s.size() - 1)) : 0.0;
    rows[k].trials = s.size();
  }
  return rows;
}

std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << "trial,method,n,m,p,sigma,function,h,eta2,k,eta1,mse,seconds\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); };
  for (const auto& r : result.records) {
    const auto& q = r.params;
    // The oracle's row bandwidth plays the role of the row threshold.
    const std::optional<double> eta1 = q.method == Method::Oracle ? q.h_row : q.eta1;
    out << r.trial << ',' << to_string(r.method) << ',' << r.n << ',' << r.m << ',' << format_shortest(r.p)
        << ',' << format_shortest(r.sigma) << ',' << r.function << ',' << opt(q.h) << ',' << opt(q.eta2) << ','
        << (q.k ? std::to_string(*q.k) : std::string()) << ',' << opt(eta1) << ',' << format_shortest(r.mse)
        << ',' << format_shortest(r.seconds) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "method,n,m,p,sigma,function,mse_mean,mse_std,trials\n";
  for (const auto& s : rows)
    out << to_string(s.method) << ',' << s.n << ',' << s.m << ',' << format_shortest(s.p) << ','
        << format_shortest(s.sigma) << ',' << s.function << ',' << format_shortest(s.mse_mean) << ','
        << format_shortest(s.mse_std) << ',' << s.trials << '\n';
}

}  // namespace onesided
