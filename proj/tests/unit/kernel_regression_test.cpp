#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "onesided/error.hpp"
#include "onesided/eval_harness.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/synthgen.hpp"
#include "support.hpp"

using namespace onesided;
using onesided::testing::line;
using onesided::testing::small_config;

TEST(RectKernel, ClosedUnitBox) {
  const std::array<double, 3> zero{0, 0, 0};
  const std::array<double, 1> half{0.5};
  const std::array<double, 1> minus_half{-0.5};
  const std::array<double, 2> outside{0.3, 0.6};
  EXPECT_TRUE(rect_kernel(zero));
  EXPECT_TRUE(rect_kernel(half));
  EXPECT_TRUE(rect_kernel(minus_half));
  EXPECT_FALSE(rect_kernel(outside));
  const std::array<double, 1> just_over{std::nextafter(0.5, 1.0)};
  EXPECT_FALSE(rect_kernel(just_over));
}

TEST(FitRows, HandComputedWindow) {
  // Target column 3 sits at 0.15; with h = 0.3 the window is [0.0, 0.3].
  const auto ds = ObservedDataset::from_observations(1, 4, {{0, 0, 1.0}, {0, 1, 2.0}, {0, 2, 5.0}},
                                                     line({0.1, 0.2, 0.9, 0.15}), 0.0);
  const auto fit = fit_rows(ds, 0.3);
  EXPECT_DOUBLE_EQ(fit.fhat(0, 3), 1.5);
  EXPECT_EQ(fit.weights(0, 3), 2);
  EXPECT_EQ(fit.weights(0, 2), 1);
  EXPECT_EQ(fit.fhat(0, 2), 5.0);
}

TEST(FitRows, EmptyWindowIsUndefined) {
  const auto ds = ObservedDataset::from_observations(1, 2, {{0, 0, 1.0}}, line({0.0, 1.0}), 0.0);
  const auto fit = fit_rows(ds, 0.1);
  EXPECT_FALSE(fit.defined(0, 1));
  EXPECT_TRUE(std::isnan(fit.fhat(0, 1)));
}

TEST(FitRows, RejectsNonPositiveBandwidth) {
  const auto ds = ObservedDataset::from_observations(1, 1, {{0, 0, 1.0}}, line({0.5}), 0.0);
  EXPECT_THROW(fit_rows(ds, 0.0), ConfigError);
  EXPECT_THROW(fit_rows(ds, -1.0), ConfigError);
}

TEST(FitRows, ConstantDataGivesConstant) {
  auto inst = generate(small_config(15, 40, 0.3, 0.0, LatentFunctionId::F1, 3));
  std::vector<Observation> obs = inst.data.observations();
  for (auto& o : obs) o.value = 2.75;
  const auto ds = ObservedDataset::from_observations(15, 40, obs, inst.data.col_covariates(), 0.0);
  for (double h : {0.01, 0.1, 0.5}) {
    const auto fit = fit_rows(ds, h);
    for (std::size_t u = 0; u < 15; ++u)
      for (std::size_t i = 0; i < 40; ++i)
        if (fit.defined(u, i)) ASSERT_EQ(fit.fhat(u, i), 2.75);
  }
}

TEST(FitRows, WideWindowIsRowMean) {
  const auto inst = generate(small_config(10, 30, 0.4, 0.2, LatentFunctionId::F2, 4));
  const auto fit = fit_rows(inst.data, 2.0);
  for (std::size_t u = 0; u < 10; ++u) {
    const auto mean = inst.data.row_mean(u);
    for (std::size_t i = 0; i < 30; ++i) {
      if (!mean) {
        ASSERT_FALSE(fit.defined(u, i));
        continue;
      }
      ASSERT_NEAR(fit.fhat(u, i), *mean, 1e-12);
      ASSERT_EQ(static_cast<std::size_t>(fit.weights(u, i)), inst.data.row_values(u).size());
    }
  }
}

TEST(FitRows, MatchesBruteForce) {
  const auto inst = generate(small_config(12, 60, 0.3, 0.2, LatentFunctionId::F3, 5));
  const auto& beta = inst.data.col_covariates();
  const double h = 0.13;
  const auto fit = fit_rows(inst.data, h);
  for (std::size_t u = 0; u < 12; ++u)
    for (std::size_t i = 0; i < 60; ++i) {
      double sum = 0;
      int w = 0;
      for (std::size_t j = 0; j < 60; ++j) {
        const auto x = inst.data.value(u, j);
        const std::array<double, 1> b{(beta[i][0] - beta[j][0]) / h};
        if (x && rect_kernel(b)) {
          sum += *x;
          ++w;
        }
      }
      ASSERT_EQ(fit.weights(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)), w);
      if (w > 0) ASSERT_NEAR(fit.fhat(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)), sum / w, 1e-12);
    }
}

TEST(FitRows, SortedAndScanPathsAgree) {
  // A constant second coordinate never excludes anything, so the 2-d
  // (linear scan) windows must equal the 1-d (binary search) ones. Sums run
  // in a different order, so means agree to rounding.
  const auto inst = generate(small_config(10, 50, 0.4, 0.2, LatentFunctionId::F1, 6));
  const auto& beta = inst.data.col_covariates();
  std::vector<double> lifted;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    lifted.push_back(beta[i][0]);
    lifted.push_back(0.5);
  }
  const ObservedDataset ds2(inst.data.mask(), {inst.data.values().begin(), inst.data.values().end()},
                            CovariateSet(beta.size(), 2, lifted), inst.data.sigma());
  for (double h : {0.02, 0.1, 0.37}) {
    const auto a = fit_rows(inst.data, h), b = fit_rows(ds2, h);
    EXPECT_EQ(a.weights, b.weights);
    for (Eigen::Index k = 0; k < a.fhat.size(); ++k)
      if (a.weights.data()[k] > 0) ASSERT_NEAR(a.fhat.data()[k], b.fhat.data()[k], 1e-14);
  }
}

TEST(FitRows, WeightsMonotoneInBandwidth) {
  const auto inst = generate(small_config(20, 80, 0.2, 0.2, LatentFunctionId::F1, 7));
  Eigen::MatrixXi prev = fit_rows(inst.data, 0.005).weights;
  for (double h = 0.01; h <= 1.0; h += 0.035) {
    const Eigen::MatrixXi w = fit_rows(inst.data, h).weights;
    ASSERT_TRUE((w.array() >= prev.array()).all()) << h;
    prev = w;
  }
}

TEST(FitRows, RangePreservation) {
  const auto inst = generate(small_config(20, 80, 0.2, 0.5, LatentFunctionId::F2, 8));
  const auto fit = fit_rows(inst.data, 0.1);
  for (std::size_t u = 0; u < 20; ++u) {
    const auto vals = inst.data.row_values(u);
    if (vals.empty()) continue;
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    for (std::size_t i = 0; i < 80; ++i)
      if (fit.defined(u, i)) {
        ASSERT_GE(fit.fhat(u, i), *lo);
        ASSERT_LE(fit.fhat(u, i), *hi);
      }
  }
}

TEST(FitRows, RowLocality) {
  const auto inst = generate(small_config(8, 40, 0.5, 0.2, LatentFunctionId::F3, 9));
  std::vector<Observation> obs = inst.data.observations();
  for (auto& o : obs)
    if (o.row != 3) o.value = -o.value * 7 + 1;
  obs.erase(std::remove_if(obs.begin(), obs.end(), [](const Observation& o) { return o.row == 5 && o.col % 2 == 0; }),
            obs.end());
  const auto mutated = ObservedDataset::from_observations(8, 40, obs, inst.data.col_covariates(), 0.2);
  const auto a = fit_rows(inst.data, 0.1), b = fit_rows(mutated, 0.1);
  EXPECT_TRUE(onesided::testing::bit_equal(a.fhat.row(3), b.fhat.row(3)));
  EXPECT_EQ(a.weights.row(3), b.weights.row(3));
}

TEST(FitRows, RowPermutationEquivariance) {
  const auto inst = generate(small_config(9, 30, 0.4, 0.2, LatentFunctionId::F1, 10));
  const std::vector<std::size_t> perm{4, 0, 8, 2, 6, 1, 3, 7, 5};
  std::vector<Observation> obs = inst.data.observations();
  for (auto& o : obs) o.row = perm[o.row];
  const auto permuted = ObservedDataset::from_observations(9, 30, obs, inst.data.col_covariates(), 0.2);
  const auto a = fit_rows(inst.data, 0.15), b = fit_rows(permuted, 0.15);
  for (std::size_t u = 0; u < 9; ++u) {
    EXPECT_TRUE(onesided::testing::bit_equal(a.fhat.row(u), b.fhat.row(perm[u])));
    EXPECT_EQ(a.weights.row(u), b.weights.row(perm[u]));
  }
}

TEST(FitRows, ParallelMatchesSerial) {
  const auto inst = generate(small_config(40, 100, 0.2, 0.2, LatentFunctionId::F2, 11));
  const auto a = fit_rows(inst.data, 0.07, 1), b = fit_rows(inst.data, 0.07, 4);
  EXPECT_TRUE(onesided::testing::bit_equal(a.fhat, b.fhat));
  EXPECT_EQ(a.weights, b.weights);
}

TEST(RowRegressionBaseline, HolderBiasBound) {
  const auto inst = generate(small_config(20, 400, 1.0, 0.0, LatentFunctionId::F3, 12));
  const double L = inst.truth.f.smoothness.L;
  for (double h : {0.01, 0.02, 0.05}) {
    const auto est = row_regression_baseline(inst.data, h);
    EXPECT_LE(mse(est, inst.truth), L * L * std::pow(h / 2, 2.0) + 1e-15) << h;
  }
}

TEST(RowRegressionBaseline, Fallbacks) {
  // Row 1 is empty; row 0 has a single observation at beta = 0.
  const auto ds = ObservedDataset::from_observations(2, 3, {{0, 0, 4.0}}, line({0.0, 0.5, 1.0}), 0.0);
  const auto est = row_regression_baseline(ds, 0.1);
  EXPECT_EQ(est.method, "rowreg");
  EXPECT_EQ(est.values(0, 0), 4.0);
  EXPECT_EQ(est.values(0, 2), 4.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(est.values(1, i), 4.0);
  const auto wide = row_regression_baseline(ds, 2.0);
  EXPECT_TRUE((wide.values.row(0).array() == 4.0).all());
}

TEST(RowRegressionBaseline, EmptyRowTakesGlobalMean) {
  const auto ds = ObservedDataset::from_observations(3, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {2, 1, 6.0}},
                                                     line({0.2, 0.8}), 0.0);
  const auto est = row_regression_baseline(ds, 0.1);
  EXPECT_DOUBLE_EQ(est.values(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(est.values(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(fallback_value(ds, 2), 6.0);
}

TEST(OracleRegression, WideWindowsGiveGlobalMean) {
  const auto inst = generate(small_config(10, 20, 0.3, 0.2, LatentFunctionId::F1, 13));
  const auto est = oracle_regression(inst.data, inst.truth.row_covariates, 2.0, 2.0);
  EXPECT_EQ(est.method, "oracle");
  EXPECT_NEAR((est.values.array() - inst.data.global_mean()).abs().maxCoeff(), 0.0, 1e-12);
}

TEST(OracleRegression, ConstantNoiselessIsExact) {
  auto cfg = small_config(12, 25, 0.3, 0.0, LatentFunctionId::F1, 14);
  cfg.function.id = LatentFunctionId::Custom;
  cfg.function.custom = [](std::span<const double>, std::span<const double>) { return -1.25; };
  const auto inst = generate(cfg);
  const auto est = oracle_regression(inst.data, inst.truth.row_covariates, 0.05, 0.05);
  EXPECT_EQ(mse(est, inst.truth), 0.0);
}

TEST(OracleRegression, BeatsRowRegressionWhenTuned) {
  GridSpec grid = GridSpec::defaults();
  grid.h_grid.clear();
  for (int k = 1; k <= 20; ++k) grid.h_grid.push_back(0.02 * k);
  grid.objective = TuneObjective::Oracle;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate(small_config(50, 50, 1.0, 0.2, LatentFunctionId::F3, seed));
    const auto o = tune(inst.data, &inst.truth, Method::Oracle, grid, SeedSpec{seed, 0, 0});
    const auto r = tune(inst.data, &inst.truth, Method::RowRegression, grid, SeedSpec{seed, 0, 0});
    EXPECT_LT(o.score, r.score) << seed;
  }
}

TEST(OracleRegression, RequiresMatchingRowCovariates) {
  const auto inst = generate(small_config(5, 5, 1.0, 0.2, LatentFunctionId::F3, 1));
  EXPECT_THROW(oracle_regression(inst.data, line({0.1, 0.2}), 0.1, 0.1), ConfigError);
}
