#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "onesided/random.hpp"

namespace onesided {

/// Points in the unit hypercube [0,1]^d, stored row-major.
class CovariateSet {
 public:
  CovariateSet() = default;
  /// Throws ConfigError if values.size() != count * dim or a coordinate leaves [0,1].
  CovariateSet(std::size_t count, std::size_t dim, std::vector<double> values);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> operator[](std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& raw() const { return values_; }

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// max_l |a_l - b_l|
double max_norm_distance(std::span<const double> a, std::span<const double> b);

struct Entry {
  std::size_t row;
  std::size_t col;
};

/// The observed index set E. Entries are held in row-major (CSR) order, so
/// per-row iteration is contiguous; membership goes through a hash set.
class ObservationMask {
 public:
  ObservationMask() = default;
  /// Throws ConfigError on out-of-range or duplicate entries.
  ObservationMask(std::size_t n, std::size_t m, std::vector<Entry> entries);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return m_; }
  std::size_t size() const { return col_index_.size(); }

  bool contains(std::size_t row, std::size_t col) const {
    return lookup_.count(static_cast<std::uint64_t>(row) * m_ + col) != 0;
  }
  /// Sorted observed columns of a row.
  std::span<const std::size_t> row_cols(std::size_t row) const {
    return {col_index_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }
  /// Position of the row's first entry in CSR order.
  std::size_t row_offset(std::size_t row) const { return row_ptr_[row]; }
  /// CSR position of (row, col), if observed.
  std::optional<std::size_t> position(std::size_t row, std::size_t col) const;

  std::vector<Entry> entries() const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_index_;
  std::unordered_set<std::uint64_t> lookup_;
};

struct Observation {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Noisy observations X on a mask, the column covariates, and the (known)
/// noise level. Row covariates are deliberately absent.
class ObservedDataset {
 public:
  ObservedDataset() = default;
  /// values are aligned with the mask's CSR order.
  ObservedDataset(ObservationMask mask, std::vector<double> values, CovariateSet col_covariates,
                  double sigma);
  static ObservedDataset from_observations(std::size_t n, std::size_t m,
                                           std::vector<Observation> observations,
                                           CovariateSet col_covariates, double sigma);

  std::size_t rows() const { return mask_.rows(); }
  std::size_t cols() const { return mask_.cols(); }
  const ObservationMask& mask() const { return mask_; }
  const CovariateSet& col_covariates() const { return beta_; }
  double sigma() const { return sigma_; }

  std::span<const double> values() const { return values_; }
  std::span<const double> row_values(std::size_t row) const {
    return std::span<const double>(values_).subspan(mask_.row_offset(row),
                                                    mask_.row_cols(row).size());
  }
  std::optional<double> value(std::size_t row, std::size_t col) const;

  /// Mean of all observed values; 0 when nothing is observed.
  double global_mean() const;
  std::optional<double> row_mean(std::size_t row) const;

  std::vector<Observation> observations() const;
  /// Order-sensitive hash of shape, mask, values, covariates and sigma.
  std::uint64_t content_hash() const;

 private:
  ObservationMask mask_;
  std::vector<double> values_;
  CovariateSet beta_;
  double sigma_ = 0.0;
};

enum class LatentFunctionId { F1, F2, F3, Custom };

/// Declared Holder parameters: |f(x) - f(x')| <= L ||x - x'||_inf^lambda.
struct HolderSmoothness {
  double lambda = 1.0;
  double L = 1.0;
};

using LatentEvaluator = std::function<double(std::span<const double>, std::span<const double>)>;

/// The latent function f(alpha, beta) behind a ground-truth matrix.
struct LatentFunction {
  LatentFunctionId id = LatentFunctionId::F1;
  /// Required for Custom, ignored otherwise.
  LatentEvaluator custom;
  HolderSmoothness smoothness;

  double operator()(std::span<const double> alpha, std::span<const double> beta) const;
};

std::string to_string(LatentFunctionId id);
/// Accepts "F1", "F2", "F3" (case-insensitive); throws ConfigError otherwise.
LatentFunctionId parse_function_id(const std::string& name);

/// Generator output. Used by evaluation and oracle baselines only.
struct GroundTruthInstance {
  LatentFunction f;
  CovariateSet row_covariates;
  CovariateSet col_covariates;
  Eigen::MatrixXd F;

  std::size_t rows() const { return static_cast<std::size_t>(F.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(F.cols()); }
};

/// Dense completion F-hat with the producing method's tag.
struct DenseEstimate {
  DenseEstimate() = default;
  /// Throws std::domain_error if any entry is non-finite.
  DenseEstimate(Eigen::MatrixXd values, std::string method);

  Eigen::MatrixXd values;
  std::string method;
};

/// E' (distance estimation) and E'' (prediction). With splitting disabled
/// both point at the same dataset.
struct DatasetSplit {
  std::shared_ptr<const ObservedDataset> distance_part;
  std::shared_ptr<const ObservedDataset> prediction_part;

  bool aliased() const { return distance_part == prediction_part; }
};

/// Assigns every observed entry to E' or E'' by a fair coin from the
/// SampleSplit stream of seed. Disabled: both parts alias ds.
DatasetSplit split_mask(const ObservedDataset& ds, const SeedSpec& seed, bool enabled);

/// Keeps the entries whose CSR position has keep[pos] == true.
ObservedDataset subset(const ObservedDataset& ds, const std::vector<bool>& keep);

}  // namespace onesided
