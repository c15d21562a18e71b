#include "onesided/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "onesided/error.hpp"

namespace onesided {

CovariateSet::CovariateSet(std::size_t count, std::size_t dim, std::vector<double> values)
    : count_(count), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw ConfigError("covariate dimension must be at least 1");
  if (values_.size() != count_ * dim_)
    throw ConfigError("covariate set expects " + std::to_string(count_ * dim_) + " values, got " +
                      std::to_string(values_.size()));
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("covariate coordinate outside [0,1]");
}

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) d = std::max(d, std::fabs(a[l] - b[l]));
  return d;
}

ObservationMask::ObservationMask(std::size_t n, std::size_t m, std::vector<Entry> entries)
    : n_(n), m_(m) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(n_ + 1, 0);
  col_index_.reserve(entries.size());
  lookup_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [row, col] = entries[k];
    if (row >= n_ || col >= m_)
      throw ConfigError("observation (" + std::to_string(row) + "," + std::to_string(col) +
                        ") outside a " + std::to_string(n_) + "x" + std::to_string(m_) + " matrix");
    if (k > 0 && entries[k - 1].row == row && entries[k - 1].col == col)
      throw ConfigError("duplicate observation (" + std::to_string(row) + "," +
                        std::to_string(col) + ")");
    ++row_ptr_[row + 1];
    col_index_.push_back(col);
    lookup_.insert(static_cast<std::uint64_t>(row) * m_ + col);
  }
  for (std::size_t u = 0; u < n_; ++u) row_ptr_[u + 1] += row_ptr_[u];
}

std::optional<std::size_t> ObservationMask::position(std::size_t row, std::size_t col) const {
  if (row >= n_) return std::nullopt;
  const auto cols = row_cols(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(), col);
  if (it == cols.end() || *it != col) return std::nullopt;
  return row_ptr_[row] + static_cast<std::size_t>(it - cols.begin());
}

std::vector<Entry> ObservationMask::entries() const {
  std::vector<Entry> out;
  out.reserve(size());
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t col : row_cols(u)) out.push_back({u, col});
  return out;
}

ObservedDataset::ObservedDataset(ObservationMask mask, std::vector<double> values,
                                 CovariateSet col_covariates, double sigma)
    : mask_(std::move(mask)),
      values_(std::move(values)),
      beta_(std::move(col_covariates)),
      sigma_(sigma) {
  if (values_.size() != mask_.size())
    throw ConfigError("dataset values do not match the observation mask");
  if (beta_.size() != mask_.cols())
    throw ConfigError("column covariates: expected " + std::to_string(mask_.cols()) +
                      " points, got " + std::to_string(beta_.size()));
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw ConfigError("sigma must be >= 0");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("observed value is not finite");
}

ObservedDataset ObservedDataset::from_observations(std::size_t n, std::size_t m,
                                                   std::vector<Observation> observations,
                                                   CovariateSet col_covariates, double sigma) {
  std::sort(observations.begin(), observations.end(), [](const Observation& a, const Observation& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> entries;
  std::vector<double> values;
  entries.reserve(observations.size());
  values.reserve(observations.size());
  for (const auto& o : observations) {
    entries.push_back({o.row, o.col});
    values.push_back(o.value);
  }
  return ObservedDataset(ObservationMask(n, m, std::move(entries)), std::move(values),
                         std::move(col_covariates), sigma);
}

std::optional<double> ObservedDataset::value(std::size_t row, std::size_t col) const {
  const auto pos = mask_.position(row, col);
  if (!pos) return std::nullopt;
  return values_[*pos];
}

double ObservedDataset::global_mean() const {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

std::optional<double> ObservedDataset::row_mean(std::size_t row) const {
  const auto vals = row_values(row);
  if (vals.empty()) return std::nullopt;
  double s = 0.0;
  for (double v : vals) s += v;
  return s / static_cast<double>(vals.size());
}

std::vector<Observation> ObservedDataset::observations() const {
  std::vector<Observation> out;
  out.reserve(values_.size());
  for (std::size_t u = 0; u < rows(); ++u) {
    const auto cols = mask_.row_cols(u);
    const auto vals = row_values(u);
    for (std::size_t k = 0; k < cols.size(); ++k) out.push_back({u, cols[k], vals[k]});
  }
  return out;
}

namespace {

std::uint64_t bits_of(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

}  // namespace

std::uint64_t ObservedDataset::content_hash() const {
  std::uint64_t h = mix64(rows()) ^ mix64(cols() + 1);
  auto feed = [&h](std::uint64_t x) { h = mix64(h ^ x); };
  feed(bits_of(sigma_));
  for (const auto& e : mask_.entries()) feed(static_cast<std::uint64_t>(e.row) * cols() + e.col);
  for (double v : values_) feed(bits_of(v));
  for (double b : beta_.raw()) feed(bits_of(b));
  return h;
}

DenseEstimate::DenseEstimate(Eigen::MatrixXd v, std::string m)
    : values(std::move(v)), method(std::move(m)) {
  if (!values.allFinite()) throw std::domain_error("estimate '" + method + "' has non-finite entries");
}

ObservedDataset subset(const ObservedDataset& ds, const std::vector<bool>& keep) {
  if (keep.size() != ds.mask().size()) throw ConfigError("subset: keep flags do not match mask");
  std::vector<Entry> entries;
  std::vector<double> values;
  const auto all = ds.mask().entries();
  const auto vals = ds.values();
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (!keep[k]) continue;
    entries.push_back(all[k]);
    values.push_back(vals[k]);
  }
  return ObservedDataset(ObservationMask(ds.rows(), ds.cols(), std::move(entries)),
                         std::move(values), ds.col_covariates(), ds.sigma());
}

DatasetSplit split_mask(const ObservedDataset& ds, const SeedSpec& seed, bool enabled) {
  if (!enabled) {
    auto shared = std::make_shared<const ObservedDataset>(ds);
    return {shared, shared};
  }
  RandomStream coin(seed.with_stage(Stage::SampleSplit));
  std::vector<bool> first(ds.mask().size());
  for (std::size_t k = 0; k < first.size(); ++k) first[k] = coin.bernoulli(0.5);
  std::vector<bool> second(first.size());
  for (std::size_t k = 0; k < first.size(); ++k) second[k] = !first[k];
  return {std::make_shared<const ObservedDataset>(subset(ds, first)),
          std::make_shared<const ObservedDataset>(subset(ds, second))};
}

}  // namespace onesided
