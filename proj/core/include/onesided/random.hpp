#pragma once

#include <cstdint>

namespace onesided {

/// Named purposes for random streams. Each stage draws from its own stream,
/// so adding a consumer never shifts the draws of another.
enum class Stage : std::uint64_t {
  RowCovariates = 1,
  ColCovariates = 2,
  Mask = 3,
  Noise = 4,
  SampleSplit = 5,
  Validation = 6,
  AlsInit = 7,
};

/// Identifies a random stream: master seed plus (trial, stage).
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
  std::uint64_t stage = 0;

  SeedSpec with_stage(Stage s) const { return {master, trial, static_cast<std::uint64_t>(s)}; }
  SeedSpec with_trial(std::uint64_t t) const { return {master, t, stage}; }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based generator: draw k of a stream is a pure function of
/// (key, k), so draws are identical across platforms and independent of
/// how many other streams exist.
class RandomStream {
 public:
  explicit RandomStream(const SeedSpec& seed);

  /// Independent child stream, e.g. one per matrix row.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Standard normal via the inverse CDF of uniform_open().
  double normal();
  bool bernoulli(double p);

  std::uint64_t key() const { return key_; }

 private:
  RandomStream(std::uint64_t key, int) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Quantile function of the standard normal distribution (Wichura AS241,
/// about 16 digits of accuracy). Requires 0 < p < 1.
double normal_quantile(double p);

}  // namespace onesided
