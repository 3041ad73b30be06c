#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "pdelearn/errors.hpp"
#include "pdelearn/minimax_bench.hpp"
#include "pdelearn/relu3_net.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/scaling_lab.hpp"
#include "pdelearn/simd/kernels.hpp"
#include "pdelearn/spectral_estimators.hpp"
#include "verify_suites.hpp"

namespace pdelearn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void require_keys(const json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::string config_hash(const std::string& command, const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : command + "\n" + config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Run directory <out>/<command>-<hash> holding manifest.json plus outputs.
class RunDir {
 public:
  RunDir(const std::string& out, const std::string& command, const json& config)
      : path_(fs::path(out) / (command + "-" + config_hash(command, config))) {
    fs::create_directories(path_);
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["config_hash"] = config_hash(command, config);
    manifest["versions"] = {{"pdelearn", kVersion},
                            {"compiler", __VERSION__},
                            {"isa", std::string(simd::isa_name(simd::active().isa))}};
    extra_ = manifest;
  }

  fs::path file(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }
  void note(const std::string& key, json value) { extra_[key] = std::move(value); }

  void write_manifest() const { write_text("manifest.json", extra_.dump(2) + "\n"); }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream os(file(name), std::ios::binary);
    os << text;
    if (!os) throw std::runtime_error("failed to write " + file(name).string());
  }

 private:
  fs::path path_;
  json extra_;
};

int cmd_verify(const std::string& suite, std::ostream& out) {
  const auto results = run_suite(suite);
  print_report(out, results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const json raw = load_config(config_path);
  const ExperimentConfig cfg = config_from_json(raw, {"n", "replicate"});
  if (!raw.contains("n")) throw ConfigError("fit config needs key 'n'");
  const auto n = get_or<std::int64_t>(raw, "n", 0);
  const int replicate = get_or<int>(raw, "replicate", 0);
  json echo = config_to_json(cfg);
  echo["n"] = n;
  echo["replicate"] = replicate;
  RunDir run(out_dir, "fit", echo);

  const SingleFit fit = fit_single(cfg, n, replicate);
  if (fit.spectral) {
    std::ostringstream os;
    write_spectral(os, *fit.spectral);
    run.write_text("estimate.txt", os.str());
  } else {
    std::ostringstream os;
    write_checkpoint(os, *fit.network);
    run.write_text("checkpoint.txt", os.str());
    std::ostringstream trace;
    write_trace_csv(trace, fit.trace);
    run.write_text("trace.csv", trace.str());
  }
  json errors = {{"n", n},          {"replicate", replicate},   {"seed", fit.seed},
                 {"cutoff", fit.cutoff}, {"L2", fit.errors[0]}, {"H1", fit.errors[1]},
                 {"H2", fit.errors[2]}};
  run.write_text("errors.json", errors.dump(2) + "\n");
  run.note("seeds", {{"replicate_seed", fit.seed}});
  run.write_manifest();
  out << "run directory: " << run.path().string() << '\n';
  out << std::setprecision(6) << "L2 error " << fit.errors[0] << "\nH1 error " << fit.errors[1]
      << "\nH2 error " << fit.errors[2] << '\n';
  return kExitOk;
}

int cmd_scale(const std::string& config_path, const std::string& out_dir, int threads, bool plot,
              std::ostream& out) {
  const ExperimentConfig cfg = config_from_json(load_config(config_path));
  RunDir run(out_dir, "scale", config_to_json(cfg));
  const ScalingResult result = run_experiment(cfg, threads);
  std::ostringstream csv;
  write_results_csv(csv, result);
  run.write_text("results.csv", csv.str());
  run.write_text("summary.json", summary_json(result).dump(2) + "\n");
  if (plot) {
    std::ostringstream svg;
    write_plot_svg(svg, result);
    run.write_text("plot.svg", svg.str());
  }
  json seeds = json::array();
  for (const auto& row : result.rows) {
    for (const auto& rep : row.replicates) seeds.push_back({{"n", row.n}, {"replicate", rep.replicate}, {"seed", rep.seed}});
  }
  run.note("seeds", seeds);
  run.write_manifest();
  out << "run directory: " << run.path().string() << '\n';
  out << std::setprecision(6) << "squared-norm slope " << result.fit.slope << " (R^2 " << result.fit.r2
      << ")\nnorm slope " << result.norm_fit.slope << " (R^2 " << result.norm_fit.r2 << ")\n";
  for (const auto& row : result.rows) {
    out << "  n=" << row.n << " error=" << row.error;
    if (row.cutoff > 0) out << " xi=" << row.cutoff;
    out << '\n';
  }
  return kExitOk;
}

int cmd_dims(const std::string& config_path, const std::string& out_dir, int threads,
             std::ostream& out) {
  const json raw = load_config(config_path);
  const ExperimentConfig base = config_from_json(raw, {"dims"});
  const auto dims = get_or<std::vector<int>>(raw, "dims", {});
  if (dims.size() < 2) throw ConfigError("dims config needs a 'dims' list with >= 2 entries");
  std::vector<ExperimentConfig> cfgs;
  for (int d : dims) {
    ExperimentConfig c = base;
    c.d = d;
    c.validate();
    cfgs.push_back(c);
  }
  json echo = config_to_json(base);
  echo.erase("d");
  echo["dims"] = dims;
  RunDir run(out_dir, "dims", echo);
  const DimensionLaw law = dimension_sweep(cfgs, threads);
  std::ostringstream csv;
  csv << "d,slope,r2\n" << std::setprecision(17);
  for (const auto& p : law.points) csv << p.d << ',' << p.slope << ',' << p.r2 << '\n';
  run.write_text("dims.csv", csv.str());
  run.write_text("summary.json",
                 json{{"a", law.a}, {"b", law.b}, {"r2", law.r2}, {"fit", "1/|slope| = a*d + b"}}.dump(2) + "\n");
  run.write_manifest();
  out << "run directory: " << run.path().string() << '\n';
  out << std::setprecision(6) << "1/|slope| = " << law.a << " d + " << law.b << " (R^2 " << law.r2 << ")\n";
  return kExitOk;
}

int cmd_lowerbound(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const json raw = load_config(config_path);
  require_keys(raw, {"s_values", "d_values", "m_grid", "omega", "V", "normalization", "quad_order",
                     "tolerance"});
  json cfg;
  cfg["s_values"] = get_or<std::vector<double>>(raw, "s_values", {3.0, 4.0});
  cfg["d_values"] = get_or<std::vector<int>>(raw, "d_values", {1, 2});
  cfg["m_grid"] = get_or<std::vector<int>>(raw, "m_grid", {4, 8, 16});
  cfg["omega"] = get_or<double>(raw, "omega", 1.0);
  cfg["V"] = get_or<double>(raw, "V", 1.0);
  cfg["normalization"] = get_or<std::string>(raw, "normalization", "per_cell");
  cfg["quad_order"] = get_or<int>(raw, "quad_order", 32);
  cfg["tolerance"] = get_or<double>(raw, "tolerance", 0.05);
  const std::string norm_name = cfg["normalization"];
  if (norm_name != "per_cell" && norm_name != "as_written") {
    throw ConfigError("normalization must be per_cell or as_written");
  }
  const auto normalization =
      norm_name == "per_cell" ? BumpNormalization::kPerCell : BumpNormalization::kAsWritten;
  const auto grid = cfg["m_grid"].get<std::vector<int>>();
  if (grid.size() < 2) throw ConfigError("m_grid needs at least 2 entries");
  const double tol = cfg["tolerance"];

  RunDir run(out_dir, "lowerbound", cfg);
  json summary = json::array();
  bool ok = true;
  for (double s : cfg["s_values"].get<std::vector<double>>()) {
    for (int d : cfg["d_values"].get<std::vector<int>>()) {
      const auto rows = separation_scaling(grid, s, d, cfg["omega"], cfg["V"], normalization,
                                           cfg["quad_order"]);
      std::ostringstream csv;
      write_separation_csv(csv, rows);
      std::ostringstream name;
      name << "separation_s" << s << "_d" << d << ".csv";
      run.write_text(name.str(), csv.str());
      const double shift = normalization == BumpNormalization::kPerCell ? 0.0 : d;
      for (SeparationNorm norm : {SeparationNorm::kH1Semi, SeparationNorm::kH2Semi, SeparationNorm::kKl}) {
        std::vector<PowerLawPoint> pts;
        for (const auto& r : rows) {
          if (r.norm == norm) pts.push_back({static_cast<double>(r.m), r.separation});
        }
        const double exponent = -fit_powerlaw(pts).slope;
        const double expected = (norm == SeparationNorm::kH1Semi ? 2.0 * s - 2.0 : 2.0 * s - 4.0) + shift;
        const bool pass = std::abs(exponent - expected) <= tol * std::abs(expected);
        ok = ok && pass;
        summary.push_back({{"s", s}, {"d", d}, {"norm", std::string(separation_norm_name(norm))},
                           {"exponent", exponent}, {"expected", expected}, {"pass", pass}});
        out << (pass ? "PASS " : "FAIL ") << "s=" << s << " d=" << d << ' '
            << separation_norm_name(norm) << " exponent " << std::setprecision(6) << exponent
            << " expected " << expected << '\n';
      }
    }
  }
  run.write_text("summary.json", summary.dump(2) + "\n");
  run.write_manifest();
  out << "run directory: " << run.path().string() << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_gram(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const json raw = load_config(config_path);
  require_keys(raw, {"d", "xi", "V", "n_grid", "seeds", "base_seed", "tol"});
  json cfg;
  cfg["d"] = get_or<int>(raw, "d", 2);
  cfg["xi"] = get_or<int>(raw, "xi", 2);
  cfg["V"] = get_or<double>(raw, "V", 1.0);
  cfg["n_grid"] = get_or<std::vector<std::int64_t>>(raw, "n_grid", {100, 1000, 10000, 100000});
  cfg["seeds"] = get_or<int>(raw, "seeds", 20);
  cfg["base_seed"] = get_or<std::uint64_t>(raw, "base_seed", 0);
  cfg["tol"] = get_or<double>(raw, "tol", 1e-8);
  const int d = cfg["d"];
  const int seeds = cfg["seeds"];
  const auto grid = cfg["n_grid"].get<std::vector<std::int64_t>>();
  if (d < 1 || cfg["xi"].get<int>() < 1 || seeds < 1 || grid.size() < 2 || !(cfg["V"].get<double>() > 0.0)) {
    throw ConfigError("gram config needs d, xi, seeds >= 1, V > 0 and >= 2 sample sizes");
  }

  RunDir run(out_dir, "gram", cfg);
  const SpectralFunction zero(d);
  std::ostringstream csv;
  csv << "n,seed,deviation\n" << std::setprecision(17);
  std::vector<PowerLawPoint> medians;
  for (std::int64_t n : grid) {
    if (n < 1) throw ConfigError("n_grid entries must be >= 1");
    std::vector<double> devs;
    for (int r = 0; r < seeds; ++r) {
      const std::uint64_t seed = replicate_seed(cfg["base_seed"], n, r);
      const SampleSet samples = draw_samples(zero, static_cast<std::size_t>(n), seed, 0.0);
      devs.push_back(gram_deviation(samples, cfg["xi"], cfg["V"], cfg["tol"]));
      csv << n << ',' << seed << ',' << devs.back() << '\n';
    }
    medians.push_back({static_cast<double>(n), aggregate_errors(devs, Aggregate::kMedian)});
    out << "n=" << n << " median deviation " << std::setprecision(6) << medians.back().error << '\n';
  }
  const PowerLawFit fit = fit_powerlaw(medians);
  run.write_text("gram.csv", csv.str());
  run.write_text("summary.json", json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}}.dump(2) + "\n");
  run.write_manifest();
  out << "slope " << fit.slope << " (R^2 " << fit.r2 << ")\nrun directory: " << run.path().string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pdelearn: learning solutions of -Lap u + V u = f on the unit cube"};
  app.require_subcommand(1);
  std::string config;
  std::string out_dir = "runs";
  int threads = 0;
  std::string suite = "all";
  bool plot = false;

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suite, "identities|gradients|truncation|orthonormality|all");
  auto add_common = [&](CLI::App* sub, bool with_threads) {
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output root directory");
    if (with_threads) sub->add_option("--threads", threads, "worker cap (0 = all cores)");
  };
  auto* fit = app.add_subcommand("fit", "single estimator fit");
  add_common(fit, false);
  auto* scale = app.add_subcommand("scale", "sample-size sweep with power-law fit");
  add_common(scale, true);
  scale->add_flag("--plot", plot, "also write plot.svg");
  auto* dims = app.add_subcommand("dims", "dimension sweep");
  add_common(dims, true);
  auto* lower = app.add_subcommand("lowerbound", "bump-hypothesis separation scaling");
  add_common(lower, false);
  auto* gram = app.add_subcommand("gram", "Gram-matrix deviation sweep");
  add_common(gram, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }
  if (threads < 0) {
    err << "error: --threads must be >= 0\n";
    return kExitConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, out);
    if (fit->parsed()) return cmd_fit(config, out_dir, out);
    if (scale->parsed()) return cmd_scale(config, out_dir, threads, plot, out);
    if (dims->parsed()) return cmd_dims(config, out_dir, threads, out);
    if (lower->parsed()) return cmd_lowerbound(config, out_dir, out);
    if (gram->parsed()) return cmd_gram(config, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitConfigError;
}

}  // namespace pdelearn::cli
