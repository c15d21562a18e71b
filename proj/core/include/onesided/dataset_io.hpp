#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "onesided/data_model.hpp"

namespace onesided {

/// Contents of header.json in a dataset directory.
struct DatasetHeader {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t d1 = 1;
  std::size_t d2 = 1;
  double p = 0.0;
  double sigma = 0.0;
  std::string function = "F1";
  std::uint64_t seed = 0;
};

/// A dataset directory read back from disk. truth is present when
/// truth.csv exists; its row covariates are empty unless alpha.csv exists.
struct DatasetBundle {
  DatasetHeader header;
  ObservedDataset data;
  std::optional<GroundTruthInstance> truth;

  bool has_alpha() const { return truth && truth->row_covariates.size() == header.n; }
};

/// Shortest round-trip form is not used: always 17 significant digits.
std::string format_double(double x);
/// Strict parse of a whole field; throws IoError naming the context.
double parse_double(std::string_view field, std::string_view context);
std::size_t parse_index(std::string_view field, std::string_view context);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Writes header.json, beta.csv, obs.csv and, with truth, alpha.csv and truth.csv.
void write_dataset(const std::filesystem::path& dir, const DatasetHeader& header,
                   const ObservedDataset& data, const GroundTruthInstance* truth);

/// Throws IoError for missing or malformed files. When the header names
/// F1-F3 and alpha.csv is present, truth.csv must match f(alpha, beta) exactly.
DatasetBundle read_dataset(const std::filesystem::path& dir);

}  // namespace onesided
