#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"
#include "onesided/random.hpp"
#include "onesided/synthgen.hpp"

namespace onesided {

/// (1/nm) sum_ui (est_ui - truth_ui)^2 over every entry. Throws ConfigError on
/// a shape mismatch.
double mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);
double mse(const DenseEstimate& estimate, const GroundTruthInstance& truth);

enum class Method { Ours, RowRegression, Oracle, Als, SoftImpute };

/// "ours", "rowreg", "oracle", "als", "softimpute".
std::string to_string(Method method);
Method parse_method(const std::string& name);
std::vector<Method> all_methods();

enum class TuneObjective { Oracle, Validation };

std::string to_string(TuneObjective objective);
TuneObjective parse_objective(const std::string& name);

/// Tuning grids. Grids are sorted and deduplicated before use; ties are
/// resolved toward the smallest values.
struct GridSpec {
  /// Step-1 bandwidth (ours), row-regression bandwidth, and both oracle bandwidths.
  std::vector<double> h_grid;
  std::vector<double> eta2_grid;
  std::vector<std::size_t> k_grid;
  /// ALS ridge candidates.
  std::vector<double> ridge_grid;
  std::size_t als_rank = 2;
  TuneObjective objective = TuneObjective::Validation;
  double val_fraction = 0.2;

  /// h, eta2 in {0.005, ..., 0.200}; k in {1, ..., 50}; ridge in {1e-3, ..., 10}.
  static GridSpec defaults();
  void validate() const;
};

/// Parameters picked by the tuner, or supplied by a caller. Only the fields
/// relevant to `method` are set.
struct ChosenParams {
  Method method = Method::Ours;
  /// ours: Step-1 bandwidth; rowreg: bandwidth; oracle: column bandwidth.
  std::optional<double> h;
  std::optional<double> eta2;
  std::optional<std::size_t> k;
  /// ours with the radius rule.
  std::optional<double> eta1;
  /// oracle: row (alpha) bandwidth.
  std::optional<double> h_row;
  std::optional<double> ridge;
  std::optional<double> lambda;
  /// Tuning objective at the chosen point (NaN when not tuned).
  double score = std::numeric_limits<double>::quiet_NaN();
};

/// Grid search. Oracle mode minimizes mse against truth over the full
/// dataset. Validation mode holds out val_fraction of the observed entries
/// (drawn from the Validation stage of seed), fits on the rest and minimizes
/// the held-out squared error. truth may be null in validation mode unless
/// the method is Oracle (which needs the row covariates).
ChosenParams tune(const ObservedDataset& ds, const GroundTruthInstance* truth, Method method,
                  const GridSpec& grid, const SeedSpec& seed, unsigned jobs = 1);

/// Fits `params.method` on ds with fixed parameters.
DenseEstimate fit_with_params(const ObservedDataset& ds, const GroundTruthInstance* truth,
                              const ChosenParams& params, const SeedSpec& seed,
                              std::size_t als_rank = 2, unsigned jobs = 1);

/// Splits the observed entries into (train, held-out) with exactly
/// round(fraction * |E|) held out, chosen uniformly at random.
std::pair<ObservedDataset, ObservedDataset> holdout_split(const ObservedDataset& ds, double fraction,
                                                          const SeedSpec& seed);

struct ExperimentRecord {
  std::size_t trial = 0;
  Method method = Method::Ours;
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  double sigma = 0.0;
  std::string function;
  ChosenParams params;
  double mse = 0.0;
  double seconds = 0.0;
  std::uint64_t dataset_hash = 0;
};

struct ExperimentResult {
  TuneObjective objective = TuneObjective::Validation;
  std::vector<ExperimentRecord> records;
};

/// Seed of one sweep cell: the base master seed mixed with the axis value.
SeedSpec cell_seed(const SeedSpec& base, std::uint64_t axis_key, std::size_t trial);

/// Generates one instance per (n, trial) and evaluates every method on it.
/// Cells run concurrently; records come back in (n, trial, method) order.
ExperimentResult sweep_n(const SynthConfig& base, const std::vector<std::size_t>& n_list,
                         const std::vector<Method>& methods, const GridSpec& grid,
                         std::size_t trials, unsigned jobs = 1);
/// Same with p varying.
ExperimentResult sweep_p(const SynthConfig& base, const std::vector<double>& p_list,
                         const std::vector<Method>& methods, const GridSpec& grid,
                         std::size_t trials, unsigned jobs = 1);

/// Runs every method on one generated instance.
std::vector<ExperimentRecord> run_cell(const SynthConfig& cfg, const std::vector<Method>& methods,
                                       const GridSpec& grid, std::size_t trial, unsigned jobs = 1);

struct SummaryRow {
  Method method = Method::Ours;
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  double sigma = 0.0;
  std::string function;
  double mse_mean = 0.0;
  /// Sample standard deviation (n - 1 denominator); 0 for a single trial.
  double mse_std = 0.0;
  std::size_t trials = 0;
};

/// One row per (method, n, m, p, sigma, function) in first-appearance order.
std::vector<SummaryRow> summarize(const ExperimentResult& result);

/// trial,method,n,m,p,sigma,function,h,eta2,k,eta1,mse,seconds
void write_results_csv(std::ostream& out, const ExperimentResult& result);
/// method,n,m,p,sigma,function,mse_mean,mse_std,trials
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Shortest round-trip decimal form.
std::string format_shortest(double x);

}  // namespace onesided
