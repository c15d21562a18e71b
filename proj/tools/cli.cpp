#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "onesided/baselines.hpp"
#include "onesided/dataset_io.hpp"
#include "onesided/error.hpp"
#include "onesided/eval_harness.hpp"
#include "onesided/kernel_regression.hpp"
#include "onesided/nn_completion.hpp"
#include "onesided/row_distance.hpp"
#include "onesided/synthgen.hpp"

namespace onesided::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // instance
      "n", "m", "d1", "d2", "p", "sigma", "function", "seed",
      // fixed estimator parameters
      "h", "eta1", "eta2", "k", "hRow", "ridge", "lambda", "split", "alsRank",
      // tuning grids
      "hGrid", "eta2Grid", "kGrid", "ridgeGrid", "objective", "valFraction",
      // sweeps
      "trials", "nList", "pList", "methods", "jobs"};
  return keys;
}

void check_keys(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "' in " + where);
}

// Layered settings: config file, then --set overrides, then dedicated flags.
class Settings {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config " + path + ": " + e.what());
    }
    check_keys(j, path);
    for (const auto& [key, value] : j.items()) values_[key] = value;
  }

  void apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
    json value = json::parse(text, nullptr, false);
    values_[key] = value.is_discarded() ? json(text) : value;
  }

  void set(const std::string& key, json value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.contains(key) && !values_[key].is_null(); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return values_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
  template <class T>
  std::optional<T> maybe(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get<T>(key, T{});
  }

 private:
  json values_ = json::object();
};

unsigned resolve_cli_jobs(int flag, const Settings& s) {
  if (flag >= 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("ONESIDED_MC_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("ONESIDED_MC_JOBS must be a non-negative integer, got '") + env + "'");
  }
  return s.get<unsigned>("jobs", 0u);
}

GridSpec grid_from(const Settings& s) {
  GridSpec g = GridSpec::defaults();
  g.h_grid = s.get("hGrid", g.h_grid);
  g.eta2_grid = s.get("eta2Grid", g.eta2_grid);
  g.k_grid = s.get("kGrid", g.k_grid);
  g.ridge_grid = s.get("ridgeGrid", g.ridge_grid);
  g.als_rank = s.get<std::size_t>("alsRank", g.als_rank);
  g.objective = parse_objective(s.get<std::string>("objective", "validation"));
  g.val_fraction = s.get("valFraction", g.val_fraction);
  g.validate();
  return g;
}

SynthConfig synth_from(const Settings& s) {
  SynthConfig cfg;
  cfg.n = s.get<std::size_t>("n", cfg.n);
  cfg.m = s.get<std::size_t>("m", cfg.m);
  cfg.d1 = s.get<std::size_t>("d1", cfg.d1);
  cfg.d2 = s.get<std::size_t>("d2", cfg.d2);
  cfg.p = s.get("p", cfg.p);
  cfg.sigma = s.get("sigma", cfg.sigma);
  cfg.function = make_latent_function(parse_function_id(s.get<std::string>("function", "F1")));
  cfg.seed = SeedSpec{s.get<std::uint64_t>("seed", 0), 0, 0};
  cfg.validate();
  return cfg;
}

SeedSpec seed_from(const Settings& s) { return SeedSpec{s.get<std::uint64_t>("seed", 0), 0, 0}; }

DatasetBundle load(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--data is required");
  return read_dataset(dir);
}

double observed_fraction(const DatasetBundle& b) {
  if (b.header.p > 0.0) return b.header.p;
  const double cells = static_cast<double>(b.header.n * b.header.m);
  return std::max(static_cast<double>(b.data.mask().size()) / cells, 1.0 / cells);
}

TheoryParams recipe_for(const DatasetBundle& b) {
  const HolderSmoothness smooth = b.truth ? b.truth->f.smoothness : HolderSmoothness{};
  return theory_params(b.header.n, b.header.m, observed_fraction(b), smooth.lambda, smooth.L, b.header.d1,
                       b.header.d2, b.header.sigma);
}

// Fixed parameters for `estimate`: explicit settings first, then the
// unit-constant recipes.
ChosenParams params_for(Method method, const DatasetBundle& b, const Settings& s) {
  const TheoryParams tp = recipe_for(b);
  const double lambda = tp.lambda;
  const double mp = static_cast<double>(b.header.m) * observed_fraction(b);
  const double nmp = mp * static_cast<double>(b.header.n);
  const double d1 = static_cast<double>(b.header.d1), d2 = static_cast<double>(b.header.d2);
  ChosenParams q;
  q.method = method;
  switch (method) {
    case Method::Ours:
      q.h = s.get("h", tp.h);
      q.eta2 = s.get("eta2", tp.eta2);
      if (s.has("k"))
        q.k = s.get<std::size_t>("k", 1);
      else
        q.eta1 = s.get("eta1", tp.eta1);
      break;
    case Method::RowRegression:
      q.h = s.get("h", std::pow(mp, -1.0 / (2 * lambda + d2)));
      break;
    case Method::Oracle: {
      const double oracle_h = std::pow(nmp, -1.0 / (2 * lambda + d1 + d2));
      q.h = s.get("h", oracle_h);
      q.h_row = s.get("hRow", oracle_h);
      break;
    }
    case Method::Als:
      q.ridge = s.get("ridge", AlsConfig{}.ridge);
      break;
    case Method::SoftImpute:
      q.lambda = s.maybe<double>("lambda");
      break;
  }
  return q;
}

json params_json(const ChosenParams& q) {
  json j = json::object();
  if (q.h) j["h"] = *q.h;
  if (q.eta2) j["eta2"] = *q.eta2;
  if (q.k) j["k"] = *q.k;
  if (q.eta1) j["eta1"] = *q.eta1;
  if (q.h_row) j["hRow"] = *q.h_row;
  if (q.ridge) j["ridge"] = *q.ridge;
  if (q.lambda) j["lambda"] = *q.lambda;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

fs::path prepare_out(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_distances(const fs::path& path, const RowDistanceMatrix& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "u,v,dsq\n";
  for (std::size_t u = 0; u < d.size(); ++u)
    for (std::size_t v = u + 1; v < d.size(); ++v)
      if (d.comparable(u, v)) out << u << ',' << v << ',' << format_double(d(u, v)) << '\n';
}

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::string data;
  std::string method;
  std::string axis;
  std::string objective;
  std::string dump_distances;
  std::int64_t seed = -1;
  int jobs = -1;
  bool paper_scale = false;
};

Settings settings_from(const Options& o) {
  Settings s;
  if (!o.config.empty()) s.load_file(o.config);
  for (const auto& kv : o.overrides) s.apply_override(kv);
  if (o.seed >= 0) s.set("seed", static_cast<std::uint64_t>(o.seed));
  if (!o.objective.empty()) s.set("objective", o.objective);
  return s;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const Settings s = settings_from(o);
  const SynthConfig cfg = synth_from(s);
  const fs::path dir = prepare_out(o.out);
  const SyntheticInstance inst = generate(cfg);
  DatasetHeader header{cfg.n, cfg.m, cfg.d1, cfg.d2, cfg.p, cfg.sigma, to_string(cfg.function.id), cfg.seed.master};
  write_dataset(dir, header, inst.data, &inst.truth);
  out << "wrote " << dir.string() << " (" << inst.data.mask().size() << " observed entries)\n";
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const Settings s = settings_from(o);
  const Method method = parse_method(o.method);
  const unsigned jobs = resolve_cli_jobs(o.jobs, s);
  const DatasetBundle b = load(o.data);
  const fs::path dir = prepare_out(o.out);
  const SeedSpec seed = seed_from(s);
  const ChosenParams q = params_for(method, b, s);
  const GroundTruthInstance* truth = b.truth ? &*b.truth : nullptr;

  DenseEstimate est;
  if (method == Method::Ours) {
    PipelineConfig cfg;
    cfg.h = *q.h;
    cfg.neighborhoods.eta2 = *q.eta2;
    if (q.k)
      cfg.neighborhoods.row_rule = KNearestRule{*q.k};
    else
      cfg.neighborhoods.row_rule = RadiusRule{*q.eta1};
    cfg.split = s.get("split", false);
    cfg.seed = seed;
    cfg.jobs = jobs;
    PipelineResult res = full_pipeline(b.data, cfg);
    if (!o.dump_distances.empty()) write_distances(o.dump_distances, res.distances);
    est = std::move(res.estimate);
  } else if (method == Method::SoftImpute && !q.lambda) {
    est = softimpute_fit(b.data, default_softimpute_config(b.data));
  } else {
    est = fit_with_params(b.data, truth, q, seed, s.get<std::size_t>("alsRank", 2), jobs);
  }
  write_matrix_csv(dir / "estimate.csv", est.values);
  out << "method=" << to_string(method) << " params=" << params_json(q).dump();
  if (truth) out << " mse=" << format_double(mse(est, *truth));
  out << '\n';
  return kExitOk;
}

int cmd_tune(const Options& o, std::ostream& out) {
  const Settings s = settings_from(o);
  const Method method = parse_method(o.method);
  const GridSpec grid = grid_from(s);
  const unsigned jobs = resolve_cli_jobs(o.jobs, s);
  const DatasetBundle b = load(o.data);
  const fs::path dir = prepare_out(o.out);
  const GroundTruthInstance* truth = b.truth ? &*b.truth : nullptr;
  const ChosenParams q = tune(b.data, truth, method, grid, seed_from(s), jobs);
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["objective"] = to_string(grid.objective);
  j["score"] = q.score;
  j["params"] = params_json(q);
  write_text(dir / "params.json", j.dump(2) + "\n");
  out << "method=" << to_string(method) << " objective=" << to_string(grid.objective)
      << " params=" << params_json(q).dump() << " score=" << format_double(q.score) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  Settings s = settings_from(o);
  if (o.axis != "n" && o.axis != "p") throw ConfigError("--axis must be n or p");
  const bool paper = o.paper_scale;
  // Desk-scale defaults; --paper-scale switches to m = 500 and 10 trials.
  if (!s.has("m")) s.set("m", paper ? 500 : 300);
  if (!s.has("sigma")) s.set("sigma", 0.2);
  if (o.axis == "n") {
    if (!s.has("p")) s.set("p", 0.05);
  } else if (!s.has("n")) {
    s.set("n", paper ? 200 : 150);
  }
  const SynthConfig base = synth_from(s);
  const GridSpec grid = grid_from(s);
  const auto trials = s.get<std::size_t>("trials", paper ? 10 : 5);
  std::vector<Method> methods;
  for (const auto& name : s.get<std::vector<std::string>>("methods", {"ours", "rowreg", "oracle", "als", "softimpute"}))
    methods.push_back(parse_method(name));
  const unsigned jobs = resolve_cli_jobs(o.jobs, s);
  const fs::path dir = prepare_out(o.out);

  ExperimentResult result;
  nlohmann::ordered_json meta;
  meta["axis"] = o.axis;
  if (o.axis == "n") {
    const auto n_list = s.get<std::vector<std::size_t>>(
        "nList", paper ? std::vector<std::size_t>{50, 100, 200, 300, 400, 500}
                       : std::vector<std::size_t>{25, 50, 100, 150, 200});
    meta["values"] = n_list;
    result = sweep_n(base, n_list, methods, grid, trials, jobs);
  } else {
    const auto p_list = s.get<std::vector<double>>(
        "pList", paper ? std::vector<double>{0.02, 0.03, 0.05, 0.08, 0.12, 0.2}
                       : std::vector<double>{0.02, 0.03, 0.05, 0.08, 0.12});
    meta["values"] = p_list;
    result = sweep_p(base, p_list, methods, grid, trials, jobs);
  }
  {
    std::ofstream f(dir / "results.csv", std::ios::binary);
    if (!f) throw IoError("cannot write results.csv");
    write_results_csv(f, result);
  }
  const auto summary = summarize(result);
  {
    std::ofstream f(dir / "summary.csv", std::ios::binary);
    if (!f) throw IoError("cannot write summary.csv");
    write_summary_csv(f, summary);
  }
  meta["objective"] = to_string(grid.objective);
  meta["paperScale"] = paper;
  meta["trials"] = trials;
  meta["m"] = base.m;
  meta["function"] = to_string(base.function.id);
  meta["seed"] = base.seed.master;
  meta["baselineHyperparameters"] =
      "ALS rank fixed, ridge tuned over ridgeGrid; SoftImpute lambda tuned over a default geometric path";
  write_text(dir / "sweep.json", meta.dump(2) + "\n");
  for (const auto& row : summary)
    out << to_string(row.method) << " n=" << row.n << " p=" << format_shortest(row.p)
        << " mse=" << format_shortest(row.mse_mean) << " +- " << format_shortest(row.mse_std) << '\n';
  return kExitOk;
}

int cmd_distances(const Options& o, std::ostream& out) {
  const Settings s = settings_from(o);
  const unsigned jobs = resolve_cli_jobs(o.jobs, s);
  const DatasetBundle b = load(o.data);
  const fs::path dir = prepare_out(o.out);
  const double h = s.get("h", recipe_for(b).h);
  const RowRegressionFit fit = fit_rows(b.data, h, jobs);
  write_distances(dir / "distances.csv", estimate_distances(fit, b.data.sigma(), jobs));
  out << "wrote " << (dir / "distances.csv").string() << " (h=" << format_shortest(h) << ")\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix completion with column covariates: kernel regression, debiased row distances, "
               "nearest-neighbor estimation"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
    sub->add_option("--seed", o.seed, "Master seed");
  };
  auto with_jobs = [&o](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores; env ONESIDED_MC_JOBS)");
  };

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset directory");
  common(gen);
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* est = app.add_subcommand("estimate", "Complete a dataset with one method");
  common(est);
  with_jobs(est);
  est->add_option("--data", o.data, "Dataset directory")->required();
  est->add_option("--method", o.method, "ours | rowreg | oracle | als | softimpute")->required();
  est->add_option("--out", o.out, "Output directory for estimate.csv")->required();
  est->add_option("--dump-distances", o.dump_distances, "Write pairwise d-hat^2 (u,v,dsq) to this CSV");

  auto* tun = app.add_subcommand("tune", "Grid-search a method's parameters");
  common(tun);
  with_jobs(tun);
  tun->add_option("--data", o.data, "Dataset directory")->required();
  tun->add_option("--method", o.method, "ours | rowreg | oracle | als | softimpute")->required();
  tun->add_option("--out", o.out, "Output directory for params.json")->required();
  tun->add_option("--objective", o.objective, "oracle | validation");

  auto* swp = app.add_subcommand("sweep", "Replicated MSE sweep over n or p");
  common(swp);
  with_jobs(swp);
  swp->add_option("--axis", o.axis, "n | p")->required();
  swp->add_option("--out", o.out, "Output directory")->required();
  swp->add_option("--objective", o.objective, "oracle | validation");
  swp->add_flag("--paper-scale", o.paper_scale, "m = 500 and 10 trials");

  auto* dst = app.add_subcommand("distances", "Write pairwise debiased row distances");
  common(dst);
  with_jobs(dst);
  dst->add_option("--data", o.data, "Dataset directory")->required();
  dst->add_option("--out", o.out, "Output directory for distances.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (est->parsed()) return cmd_estimate(o, out);
    if (tun->parsed()) return cmd_tune(o, out);
    if (swp->parsed()) return cmd_sweep(o, out);
    if (dst->parsed()) return cmd_distances(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitConfig;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"onesided"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace onesided::cli
