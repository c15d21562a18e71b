#include "onesided/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "onesided/error.hpp"
#include "onesided/synthgen.hpp"

namespace onesided {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::string_view context) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw IoError(std::string(context) + ": cannot parse number '" + std::string(field) + "'");
  return value;
}

std::size_t parse_index(std::string_view field, std::string_view context) {
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  std::size_t value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw IoError(std::string(context) + ": cannot parse index '" + std::string(field) + "'");
  return value;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_covariates(const fs::path& path, const CovariateSet& set) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto point = set[i];
    for (std::size_t l = 0; l < point.size(); ++l) out << (l ? "," : "") << format_double(point[l]);
    out << '\n';
  }
}

CovariateSet read_covariates(const fs::path& path, std::size_t count, std::size_t dim) {
  const auto lines = read_lines(path);
  const std::string ctx = path.filename().string();
  if (lines.size() != count)
    throw IoError(ctx + ": expected " + std::to_string(count) + " rows, got " + std::to_string(lines.size()));
  std::vector<double> values;
  values.reserve(count * dim);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != dim)
      throw IoError(ctx + " line " + std::to_string(r + 1) + ": expected " + std::to_string(dim) + " columns");
    for (auto f : fields) values.push_back(parse_double(f, ctx));
  }
  try {
    return CovariateSet(count, dim, std::move(values));
  } catch (const ConfigError& e) {
    throw IoError(ctx + ": " + e.what());
  }
}

}  // namespace

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& matrix) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << (c ? "," : "") << format_double(matrix(r, c));
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  const std::string ctx = path.filename().string();
  if (lines.empty()) return {};
  const std::size_t cols = split_fields(lines.front()).size();
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != cols) throw IoError(ctx + " line " + std::to_string(r + 1) + ": ragged row");
    for (std::size_t c = 0; c < cols; ++c)
      matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_double(fields[c], ctx);
  }
  return matrix;
}

void write_dataset(const fs::path& dir, const DatasetHeader& header, const ObservedDataset& data,
                   const GroundTruthInstance* truth) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json j;
  j["n"] = header.n;
  j["m"] = header.m;
  j["d1"] = header.d1;
  j["d2"] = header.d2;
  j["p"] = header.p;
  j["sigma"] = header.sigma;
  j["function"] = header.function;
  j["seed"] = header.seed;
  open_out(dir / "header.json") << j.dump(2) << '\n';

  write_covariates(dir / "beta.csv", data.col_covariates());
  {
    auto out = open_out(dir / "obs.csv");
    out << "row,col,value\n";
    for (const auto& o : data.observations())
      out << o.row << ',' << o.col << ',' << format_double(o.value) << '\n';
  }
  if (truth) {
    write_covariates(dir / "alpha.csv", truth->row_covariates);
    write_matrix_csv(dir / "truth.csv", truth->F);
  }
}

DatasetBundle read_dataset(const fs::path& dir) {
  DatasetBundle bundle;
  {
    std::ifstream in(dir / "header.json");
    if (!in) throw IoError("cannot open " + (dir / "header.json").string());
    nlohmann::json j;
    try {
      in >> j;
      auto& h = bundle.header;
      h.n = j.at("n").get<std::size_t>();
      h.m = j.at("m").get<std::size_t>();
      h.d1 = j.value("d1", std::size_t{1});
      h.d2 = j.value("d2", std::size_t{1});
      h.p = j.value("p", 0.0);
      h.sigma = j.at("sigma").get<double>();
      h.function = j.value("function", std::string("custom"));
      h.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw IoError("header.json: " + std::string(e.what()));
    }
  }
  const auto& h = bundle.header;
  CovariateSet beta = read_covariates(dir / "beta.csv", h.m, h.d2);

  const auto lines = read_lines(dir / "obs.csv");
  if (lines.empty() || lines.front() != "row,col,value") throw IoError("obs.csv: missing header row,col,value");
  std::vector<Observation> obs;
  obs.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != 3) throw IoError("obs.csv line " + std::to_string(r + 1) + ": expected 3 columns");
    obs.push_back({parse_index(fields[0], "obs.csv"), parse_index(fields[1], "obs.csv"),
                   parse_double(fields[2], "obs.csv")});
  }
  try {
    bundle.data = ObservedDataset::from_observations(h.n, h.m, std::move(obs), beta, h.sigma);
  } catch (const ConfigError& e) {
    throw IoError(std::string("obs.csv: ") + e.what());
  }

  if (fs::exists(dir / "truth.csv")) {
    GroundTruthInstance truth;
    truth.F = read_matrix_csv(dir / "truth.csv");
    if (truth.F.rows() != static_cast<Eigen::Index>(h.n) || truth.F.cols() != static_cast<Eigen::Index>(h.m))
      throw IoError("truth.csv: shape does not match header");
    truth.col_covariates = beta;
    if (fs::exists(dir / "alpha.csv")) truth.row_covariates = read_covariates(dir / "alpha.csv", h.n, h.d1);
    try {
      truth.f = make_latent_function(parse_function_id(h.function));
      if (truth.row_covariates.size() == h.n &&
          evaluate_truth(truth.f, truth.row_covariates, beta) != truth.F)
        throw IoError("truth.csv does not equal " + h.function + "(alpha, beta)");
    } catch (const ConfigError&) {
      truth.f.id = LatentFunctionId::Custom;
    }
    bundle.truth = std::move(truth);
  }
  return bundle;
}

}  // namespace onesided
