// Acceptance checks. Run with no arguments for all criteria or with one or
// more criterion numbers. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "onesided/baselines.hpp"
#include "onesided/data_model.hpp"
#include "onesided/eval_harness.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/nn_completion.hpp"
#include "onesided/row_distance.hpp"
#include "onesided/synthgen.hpp"

using namespace onesided;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

SynthConfig config(std::size_t n, std::size_t m, double p, double sigma, LatentFunctionId f,
                   SeedSpec seed = {}) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.p = p;
  cfg.sigma = sigma;
  cfg.function = make_latent_function(f);
  cfg.seed = seed;
  return cfg;
}

double theory_h(const GroundTruthInstance& truth, std::size_t n, std::size_t m, double p, double sigma) {
  return theory_params(n, m, p, truth.f.smoothness.lambda, truth.f.smoothness.L, 1, 1, sigma).h;
}

std::string fmt(double x) { return format_shortest(x); }

Outcome debiasing() {
  const double sigma = 0.2;
  const auto inst = generate(config(2, 300, 0.3, sigma, LatentFunctionId::F3, SeedSpec{1, 0, 0}));
  const double h = theory_h(inst.truth, 2, 300, 0.3, sigma);
  const auto& obs = inst.data.observations();
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> noise(0.0, sigma);
  const int redraws = 200;
  std::vector<double> draws;
  for (int r = 0; r < redraws; ++r) {
    std::vector<Observation> noisy = obs;
    for (auto& o : noisy) o.value = inst.truth.F(o.row, o.col) + noise(rng);
    const auto ds = ObservedDataset::from_observations(2, 300, std::move(noisy), inst.data.col_covariates(), sigma);
    draws.push_back(estimate_distances(fit_rows(ds, h), sigma)(0, 1));
  }
  double mean = 0;
  for (double d : draws) mean += d;
  mean /= redraws;
  double var = 0;
  for (double d : draws) var += (d - mean) * (d - mean);
  const double se = std::sqrt(var / (redraws - 1) / redraws);
  const double target = oracle_smoothed_distance_sq(inst.truth, inst.data.mask(), h, 0, 1);
  const double gap = std::fabs(mean - target);
  return {gap <= 3 * se, "h=" + fmt(h) + " mean=" + fmt(mean) + " oracle=" + fmt(target) + " |gap|/se=" +
                             fmt(gap / se)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

Outcome concentration() {
  const std::size_t n = 30;
  const double p = 0.3, sigma = 0.2;
  std::vector<double> medians;
  std::ostringstream detail;
  for (std::size_t m : {200u, 400u, 800u}) {
    std::vector<double> errors;
    double h = 0;
    for (std::size_t trial = 0; trial < 10; ++trial) {
      const auto inst = generate(config(n, m, p, sigma, LatentFunctionId::F3, SeedSpec{2, trial, 0}));
      h = theory_h(inst.truth, n, m, p, sigma);
      const auto d = estimate_distances(fit_rows(inst.data, h), sigma);
      double worst = 0;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
          if (!d.comparable(u, v)) continue;
          const double err =
              std::fabs(std::sqrt(std::max(d(u, v), 0.0)) - std::sqrt(true_distance_sq(inst.truth, u, v)));
          worst = std::max(worst, err);
        }
      errors.push_back(worst);
    }
    medians.push_back(median(errors));
    detail << "m=" << m << " h=" << fmt(h) << " median=" << fmt(medians.back()) << " ";
  }
  return {medians[1] < medians[0] && medians[2] < medians[1], detail.str()};
}

// Step 1 and Step 2 written out directly for a tiny full instance.
Outcome step2_brute_force() {
  const std::size_t n = 3, m = 4;
  const double sigma = 0.25;
  const std::vector<double> beta = {0.1, 0.35, 0.5, 0.95};
  const double X[3][4] = {{1.5, -0.25, 2.0, 0.75}, {0.3, 0.9, -1.1, 4.0}, {2.2, 2.1, 0.0, -0.6}};
  std::vector<Observation> obs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t i = 0; i < m; ++i) obs.push_back({u, i, X[u][i]});
  const auto ds = ObservedDataset::from_observations(n, m, obs, CovariateSet(m, 1, beta), sigma);

  double worst = 0;
  for (double h : {0.3, 0.5, 1.0}) {
    double fhat[3][4];
    int W[3][4];
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t i = 0; i < m; ++i) {
        double sum = 0;
        W[u][i] = 0;
        for (std::size_t j = 0; j < m; ++j)
          if (std::fabs((beta[i] - beta[j]) / h) <= 0.5) {
            sum += X[u][j];
            ++W[u][i];
          }
        fhat[u][i] = sum / W[u][i];
      }
    PipelineConfig cfg;
    cfg.h = h;
    cfg.neighborhoods = {KNearestRule{1}, 0.1};
    const auto d = full_pipeline(ds, cfg).distances;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        if (u == v) continue;
        double sq = 0, xi = 0;
        for (std::size_t i = 0; i < m; ++i) {
          sq += (fhat[u][i] - fhat[v][i]) * (fhat[u][i] - fhat[v][i]);
          xi += 1.0 / W[u][i] + 1.0 / W[v][i];
        }
        const double direct = sq / m - sigma * sigma / m * xi;
        worst = std::max(worst, std::fabs(d(u, v) - direct));
      }
  }
  return {worst <= 1e-12, "max abs diff=" + fmt(worst)};
}

double mean_mse(const std::vector<SummaryRow>& rows, Method method, double p) {
  for (const auto& r : rows)
    if (r.method == method && r.p == p) return r.mse_mean;
  return std::nan("");
}

Outcome end_to_end_ordering() {
  const auto result = sweep_n(config(150, 300, 0.05, 0.2, LatentFunctionId::F3), {150},
                              {Method::Ours, Method::RowRegression, Method::Oracle}, GridSpec::defaults(), 5, 0);
  const auto rows = summarize(result);
  const double ours = mean_mse(rows, Method::Ours, 0.05);
  const double rowreg = mean_mse(rows, Method::RowRegression, 0.05);
  const double oracle = mean_mse(rows, Method::Oracle, 0.05);
  return {ours < rowreg && ours <= 3 * oracle,
          "ours=" + fmt(ours) + " rowreg=" + fmt(rowreg) + " oracle=" + fmt(oracle)};
}

Outcome sparsity_ordering() {
  const auto result = sweep_p(config(150, 300, 0.05, 0.2, LatentFunctionId::F1), {0.02, 0.05},
                              {Method::Ours, Method::Als, Method::SoftImpute}, GridSpec::defaults(), 5, 0);
  const auto rows = summarize(result);
  bool pass = true;
  std::ostringstream detail;
  for (double p : {0.02, 0.05}) {
    const double ours = mean_mse(rows, Method::Ours, p);
    const double als = mean_mse(rows, Method::Als, p);
    const double si = mean_mse(rows, Method::SoftImpute, p);
    pass = pass && ours < als && ours < si;
    detail << "p=" << p << ": ours=" << fmt(ours) << " als=" << fmt(als) << " softimpute=" << fmt(si) << " ";
  }
  return {pass, detail.str()};
}

Outcome rank_two() {
  bool pass = true;
  std::ostringstream detail;
  for (auto id : {LatentFunctionId::F1, LatentFunctionId::F2, LatentFunctionId::F3}) {
    const auto inst = generate(config(200, 200, 0.01, 0.0, id, SeedSpec{6, 0, 0}));
    const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(inst.truth.F).singularValues();
    const double ratio = s(2) / s(0);
    pass = pass && ratio <= 1e-8;
    detail << to_string(id) << " s3/s1=" << fmt(ratio) << " ";
  }
  return {pass, detail.str()};
}

// Collects failed sub-checks by name.
struct Checks {
  std::vector<std::string> failed;
  int total = 0;
  void operator()(bool ok, const std::string& name) {
    ++total;
    if (!ok) failed.push_back(name);
  }
};

bool nested(const std::vector<std::size_t>& inner, const std::vector<std::size_t>& outer) {
  return std::all_of(inner.begin(), inner.end(),
                     [&](std::size_t x) { return std::find(outer.begin(), outer.end(), x) != outer.end(); });
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Outcome invariants() {
  Checks check;
  const double edge[] = {0.5}, past[] = {0.5000001}, neg_edge[] = {-0.5}, inside2[] = {0.5, -0.5}, out2[] = {0.2, 0.6};
  check(rect_kernel(edge) && rect_kernel(neg_edge) && !rect_kernel(past) && rect_kernel(inside2) && !rect_kernel(out2),
        "kernel boundary");

  const auto inst = generate(config(30, 80, 0.3, 0.2, LatentFunctionId::F2, SeedSpec{7, 0, 0}));
  const auto& ds = inst.data;
  Eigen::MatrixXi prev = Eigen::MatrixXi::Zero(30, 80);
  bool monotone = true;
  for (double h : {0.02, 0.05, 0.1, 0.3, 1.0}) {
    const auto fit = fit_rows(ds, h);
    monotone = monotone && (fit.weights.array() >= prev.array()).all();
    prev = fit.weights;
  }
  check(monotone, "W monotone in h");

  const auto d = estimate_distances(fit_rows(ds, 0.1), 0.2);
  check(d.dsq == d.dsq.transpose() && (d.dsq.diagonal().array() == 0.0).all(), "distance symmetry and zero diagonal");

  bool rows_ok = true;
  for (std::size_t u = 0; u < 30; ++u) {
    std::vector<std::size_t> last;
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto nb = build_row_neighborhood(d, u, KNearestRule{k});
      rows_ok = rows_ok && contains(nb, u) && nested(last, nb);
      last = nb;
    }
    last.clear();
    for (double eta1 : {0.0, 0.01, 0.05, 0.2, 1.0}) {
      const auto nb = build_row_neighborhood(d, u, RadiusRule{eta1});
      rows_ok = rows_ok && contains(nb, u) && nested(last, nb);
      last = nb;
    }
  }
  check(rows_ok, "row neighborhood monotonicity and self-membership");
  bool cols_ok = true;
  for (std::size_t i = 0; i < 80; ++i) {
    std::vector<std::size_t> last;
    for (double eta2 : {0.0, 0.01, 0.05, 0.2, 1.0}) {
      const auto nb = build_col_neighborhood(ds.col_covariates(), i, eta2);
      cols_ok = cols_ok && contains(nb, i) && nested(last, nb);
      last = nb;
    }
  }
  check(cols_ok, "column neighborhood monotonicity and self-membership");

  double lo = 1e300, hi = -1e300;
  for (const auto& o : ds.observations()) {
    lo = std::min(lo, o.value);
    hi = std::max(hi, o.value);
  }
  bool range_ok = true;
  for (std::size_t k : {1u, 3u, 10u}) {
    const auto est = nn_predict(ds, d, {KNearestRule{k}, 0.05});
    range_ok = range_ok && est.values.minCoeff() >= lo && est.values.maxCoeff() <= hi;
  }
  check(range_ok, "nn_predict range preservation");

  std::vector<double> trace;
  AlsConfig als;
  als.seed = SeedSpec{7, 0, 0};
  als_fit(ds, als, &trace);
  bool als_ok = trace.size() >= 3;
  for (std::size_t k = 1; k < trace.size(); ++k) als_ok = als_ok && trace[k] <= trace[k - 1] * (1 + 1e-12);
  check(als_ok, "ALS objective monotone");

  SoftImputeConfig si = default_softimpute_config(ds);
  si.lambda_grid.resize(6);
  trace.clear();
  std::vector<std::size_t> ends;
  softimpute_path(ds, si, [&](std::size_t, double, const Eigen::MatrixXd&) { ends.push_back(trace.size()); }, &trace);
  bool si_ok = ends.size() == 6;
  std::size_t begin = 0;
  for (std::size_t end : ends) {
    for (std::size_t k = begin + 1; k < end; ++k) si_ok = si_ok && trace[k] <= trace[k - 1] * (1 + 1e-10) + 1e-12;
    begin = end;
  }
  check(si_ok, "SoftImpute objective monotone");

  const auto again = generate(config(30, 80, 0.3, 0.2, LatentFunctionId::F2, SeedSpec{7, 0, 0}));
  PipelineConfig pc;
  pc.h = 0.1;
  pc.neighborhoods = {KNearestRule{4}, 0.05};
  const auto e1 = full_pipeline(ds, pc).estimate.values;
  const auto e2 = full_pipeline(again.data, pc).estimate.values;
  GridSpec grid = GridSpec::defaults();
  grid.h_grid = {0.05, 0.1};
  grid.eta2_grid = {0.02, 0.05};
  grid.k_grid = {2, 5};
  const auto t1 = tune(ds, &inst.truth, Method::Ours, grid, SeedSpec{7, 0, 0});
  const auto t2 = tune(again.data, &again.truth, Method::Ours, grid, SeedSpec{7, 0, 0}, 2);
  check(ds.content_hash() == again.data.content_hash() && e1 == e2 && t1.score == t2.score, "determinism");

  std::vector<std::size_t> perm(30);
  for (std::size_t u = 0; u < 30; ++u) perm[u] = (u * 7 + 5) % 30;
  std::vector<Observation> moved = ds.observations();
  for (auto& o : moved) o.row = perm[o.row];
  const auto permuted = ObservedDataset::from_observations(30, 80, moved, ds.col_covariates(), 0.2);
  const auto dp = estimate_distances(fit_rows(permuted, 0.1), 0.2);
  const auto ep = full_pipeline(permuted, pc).estimate.values;
  bool equivariant = true;
  for (std::size_t u = 0; u < 30; ++u) {
    for (std::size_t v = 0; v < 30; ++v) equivariant = equivariant && d(u, v) == dp(perm[u], perm[v]);
    for (Eigen::Index i = 0; i < 80; ++i)
      equivariant = equivariant && std::fabs(e1(u, i) - ep(perm[u], i)) <= 1e-12;
  }
  check(equivariant, "row-permutation equivariance");

  std::string detail = std::to_string(check.total - check.failed.size()) + "/" + std::to_string(check.total) + " checks";
  for (const auto& f : check.failed) detail += "; failed: " + f;
  return {check.failed.empty(), detail};
}

Outcome regimes() {
  struct Case {
    std::size_t n;
    Regime regime;
    double h, eta1, eta2;
  };
  const double mp = 500 * 0.05;
  const double oracle_eta2 = std::pow(5 * mp, -0.25);
  const double limited_h = std::pow(mp / std::log(200.0 * 500.0), -0.4);
  const std::vector<Case> cases = {
      {2, Regime::RowOnly, std::pow(mp, -1.0 / 3), 0.0, std::pow(mp, -1.0 / 3) / 2},
      {5, Regime::OracleMatching, std::nan(""), oracle_eta2, oracle_eta2},
      {200, Regime::DistanceLimited, limited_h, 2 * limited_h, limited_h},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto t = theory_params(c.n, 500, 0.05, 1.0, 1.0, 1, 1, 0.2);
    const auto close = [](double a, double b) { return std::isnan(b) || std::fabs(a - b) <= 1e-12 * std::max(1.0, b); };
    const bool ok = t.regime == c.regime && close(t.h, c.h) && close(t.eta1, c.eta1) && close(t.eta2, c.eta2);
    pass = pass && ok;
    detail << "n=" << c.n << "->" << to_string(t.regime) << (ok ? "" : "(mismatch)") << " ";
  }
  return {pass, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "debiasing", 30, debiasing},
      {2, "distance concentration trend", 120, concentration},
      {3, "step-2 brute force", 1, step2_brute_force},
      {4, "end-to-end ordering", 600, end_to_end_ordering},
      {5, "sparsity ordering", 600, sparsity_ordering},
      {6, "rank-2 structure", 5, rank_two},
      {7, "invariant suite", 60, invariants},
      {8, "regime classifier", 1, regimes},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  int failures = 0;
  for (int id : selected) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = it->run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < it->limit_seconds;
    const bool pass = out.pass && in_time;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, it->limit_seconds);
    std::cout << "criterion " << it->id << " (" << it->name << "): " << (pass ? "PASS" : "FAIL") << "  " << out.detail
              << " [" << timing << (in_time ? "" : ", over time limit") << "]" << std::endl;
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
