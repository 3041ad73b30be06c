#include "pdelearn/scaling_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "pdelearn/errors.hpp"
#include "pdelearn/metrics.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/spectral.hpp"
#include "pdelearn/spectral_estimators.hpp"

namespace pdelearn {

namespace {

const char* truth_name(TruthKind k) {
  switch (k) {
    case TruthKind::kPowerlaw:
      return "powerlaw";
    case TruthKind::kPolynomialPairs:
      return "polynomial_pairs";
    case TruthKind::kRandomTeacher:
      return "random_teacher";
  }
  return "?";
}

template <typename E>
E parse_enum(const std::string& key, const std::string& value,
             std::initializer_list<std::pair<const char*, E>> options) {
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  throw ConfigError("config key '" + key + "': '" + value + "' is not one of " + allowed);
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (d < 1) fail("d must be >= 1");
  if (!(s > 0.0)) fail("s must be > 0");
  if (n_grid.size() < 2) fail("n_grid needs at least 2 entries");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) fail("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n_grid must be strictly increasing");
  }
  if (replicates < 1) fail("replicates must be >= 1");
  if (!(sigma >= 0.0)) fail("sigma must be >= 0");
  if (error_order < 0 || error_order > 2) fail("error_order must be 0, 1 or 2");
  if (!(V > 0.0)) fail("V must be > 0");
  if (z_truth < 1) fail("z_truth must be >= 1");
  if (!(ridge >= 0.0)) fail("ridge must be >= 0");
  if (xi_rule == XiRule::kFixed && xi < 1) fail("xi_rule fixed needs xi >= 1");
  if (xi_rule == XiRule::kTheory) {
    const double denom = objective == Objective::kDrm ? d + 2.0 * s - 2.0 : d + 2.0 * s - 4.0;
    if (!(denom > 0.0)) fail("theory xi rule needs a positive exponent denominator");
  }
  if (objective == Objective::kMdrm && !(d + 2.0 * s - 4.0 > 0.0)) {
    fail("MDRM needs d + 2s - 4 > 0");
  }
  if (truth_kind == TruthKind::kPolynomialPairs && d % 2 != 0) {
    fail("polynomial_pairs truth needs an even dimension");
  }
  if (estimator == EstimatorKind::kFourier && truth_kind == TruthKind::kPolynomialPairs) {
    fail("fourier estimator cannot represent the polynomial_pairs truth (nonzero boundary values)");
  }
  if (net_depth < 1) fail("net_depth must be >= 1");
  if (net_width < 1) fail("net_width must be >= 1");
  if (teacher_depth < 1) fail("teacher_depth must be >= 1");
  if (teacher_width < 1) fail("teacher_width must be >= 1");
  if (!(step_size >= 0.0)) fail("step_size must be >= 0");
  if (iterations < 1) fail("iterations must be >= 1");
  if (batch_size < 0) fail("batch_size must be >= 0");
  if (batch_size > n_grid.front()) fail("batch_size exceeds the smallest n");
  if (mc_points < 1000) fail("mc_points must be >= 1000");
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::set<std::string>& extra_keys) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "d",          "s",           "truth_kind",    "objective",     "estimator",  "xi_rule",
      "xi",         "n_grid",      "replicates",    "aggregate",     "sigma",      "base_seed",
      "error_order", "V",          "z_truth",       "ridge",         "net_depth",  "net_width",
      "bc_mode",    "optimizer",   "step_size",     "iterations",    "batch_size", "mc_points",
      "teacher_depth", "teacher_width"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key) && !extra_keys.contains(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  };
  auto get_enum = [&](const char* key, auto& field, auto options) {
    if (!j.contains(key)) return;
    std::string value;
    get(key, value);
    field = parse_enum(key, value, options);
  };
  get("d", c.d);
  get("s", c.s);
  get_enum("truth_kind", c.truth_kind,
           std::initializer_list<std::pair<const char*, TruthKind>>{
               {"powerlaw", TruthKind::kPowerlaw},
               {"polynomial_pairs", TruthKind::kPolynomialPairs},
               {"random_teacher", TruthKind::kRandomTeacher}});
  if (j.contains("objective")) {
    std::string value;
    get("objective", value);
    c.objective = parse_objective(value);
  }
  get_enum("estimator", c.estimator,
           std::initializer_list<std::pair<const char*, EstimatorKind>>{
               {"fourier", EstimatorKind::kFourier}, {"relu3", EstimatorKind::kRelu3}});
  get_enum("xi_rule", c.xi_rule,
           std::initializer_list<std::pair<const char*, XiRule>>{{"theory", XiRule::kTheory},
                                                                 {"fixed", XiRule::kFixed}});
  get("xi", c.xi);
  get("n_grid", c.n_grid);
  get("replicates", c.replicates);
  get_enum("aggregate", c.aggregate,
           std::initializer_list<std::pair<const char*, Aggregate>>{{"median", Aggregate::kMedian},
                                                                    {"mean", Aggregate::kMean}});
  get("sigma", c.sigma);
  get("base_seed", c.base_seed);
  get("error_order", c.error_order);
  get("V", c.V);
  get("z_truth", c.z_truth);
  get("ridge", c.ridge);
  get("net_depth", c.net_depth);
  get("net_width", c.net_width);
  if (j.contains("bc_mode")) {
    std::string value;
    get("bc_mode", value);
    c.bc_mode = parse_boundary_mode(value);
  }
  get_enum("optimizer", c.optimizer,
           std::initializer_list<std::pair<const char*, Optimizer>>{
               {"adam", Optimizer::kAdaptiveMoment}, {"sgd", Optimizer::kPlainSgd}});
  get("step_size", c.step_size);
  get("iterations", c.iterations);
  get("batch_size", c.batch_size);
  get("mc_points", c.mc_points);
  get("teacher_depth", c.teacher_depth);
  get("teacher_width", c.teacher_width);
  c.validate();
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["d"] = c.d;
  j["s"] = c.s;
  j["truth_kind"] = truth_name(c.truth_kind);
  j["objective"] = std::string(objective_name(c.objective));
  j["estimator"] = c.estimator == EstimatorKind::kFourier ? "fourier" : "relu3";
  j["xi_rule"] = c.xi_rule == XiRule::kTheory ? "theory" : "fixed";
  j["xi"] = c.xi;
  j["n_grid"] = c.n_grid;
  j["replicates"] = c.replicates;
  j["aggregate"] = c.aggregate == Aggregate::kMedian ? "median" : "mean";
  j["sigma"] = c.sigma;
  j["base_seed"] = c.base_seed;
  j["error_order"] = c.error_order;
  j["V"] = c.V;
  j["z_truth"] = c.z_truth;
  j["ridge"] = c.ridge;
  j["net_depth"] = c.net_depth;
  j["net_width"] = c.net_width;
  j["bc_mode"] = std::string(boundary_mode_name(c.bc_mode));
  j["optimizer"] = c.optimizer == Optimizer::kAdaptiveMoment ? "adam" : "sgd";
  j["step_size"] = c.step_size;
  j["iterations"] = c.iterations;
  j["batch_size"] = c.batch_size;
  j["mc_points"] = c.mc_points;
  j["teacher_depth"] = c.teacher_depth;
  j["teacher_width"] = c.teacher_width;
  return j;
}

int cutoff_for(const ExperimentConfig& cfg, std::int64_t n) {
  if (cfg.xi_rule == XiRule::kFixed) return cfg.xi;
  const double denom =
      cfg.objective == Objective::kDrm ? cfg.d + 2.0 * cfg.s - 2.0 : cfg.d + 2.0 * cfg.s - 4.0;
  const double xi = std::round(std::pow(static_cast<double>(n), 1.0 / denom));
  return std::max(1, static_cast<int>(xi));
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::int64_t n, int replicate) {
  return hash_seed({base_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(replicate)});
}

double PdeSource::value(std::span<const double> x) const {
  return -truth_->laplacian(x) + potential_ * truth_->value(x);
}

void PdeSource::gradient(std::span<const double>, std::span<double>) const {
  throw DomainError("PdeSource provides values only");
}

double PdeSource::laplacian(std::span<const double>) const {
  throw DomainError("PdeSource provides values only");
}

void PdeSource::evaluate_batch(std::span<const double> points, Derivatives need,
                               BatchJet& out) const {
  if (need != Derivatives::kValue) throw DomainError("PdeSource provides values only");
  truth_->evaluate_batch(points, Derivatives::kLaplacian, out);
  for (std::size_t i = 0; i < out.count; ++i) {
    out.value[i] = -out.laplacian[i] + potential_ * out.value[i];
  }
  out.grad.clear();
  out.laplacian.clear();
}

PolynomialPairs::PolynomialPairs(int dimension) : d_(dimension) {
  if (d_ < 2 || d_ % 2 != 0) throw DomainError("polynomial_pairs needs an even dimension >= 2");
}

double PolynomialPairs::value(std::span<const double> x) const {
  double u = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) u += x[i] * x[i + 1];
  return u;
}

void PolynomialPairs::gradient(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
    out[i] = x[i + 1];
    out[i + 1] = x[i];
  }
}

double PolynomialPairs::laplacian(std::span<const double>) const { return 0.0; }

PowerLawFit fit_powerlaw(std::span<const PowerLawPoint> rows) {
  if (rows.size() < 2) throw DomainError("power-law fit needs at least 2 rows");
  std::vector<double> x(rows.size());
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].error > 0.0) || !std::isfinite(rows[i].error)) {
      std::ostringstream msg;
      msg << "power-law fit: row " << i << " (n=" << rows[i].n << ") has nonpositive error "
          << rows[i].error;
      throw DomainError(msg.str());
    }
    if (!(rows[i].n > 0.0)) throw DomainError("power-law fit: row " + std::to_string(i) + " has n <= 0");
    x[i] = std::log(rows[i].n);
    y[i] = std::log(rows[i].error);
  }
  const double m = static_cast<double>(rows.size());
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
    syy += (y[i] - ybar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw DomainError("power-law fit needs at least two distinct n");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double aggregate_errors(std::vector<double> errors, Aggregate how) {
  if (errors.empty()) throw DomainError("nothing to aggregate");
  if (how == Aggregate::kMean) {
    return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  }
  std::sort(errors.begin(), errors.end());
  const std::size_t mid = errors.size() / 2;
  if (errors.size() % 2 == 1) return errors[mid];
  return 0.5 * (errors[mid - 1] + errors[mid]);
}

namespace {

struct Truth {
  std::shared_ptr<const PointEvaluator> solution;
  std::shared_ptr<const PointEvaluator> source;
  std::shared_ptr<const SpectralFunction> spectral;  // set for the powerlaw truth
};

Truth make_truth(const ExperimentConfig& cfg) {
  Truth t;
  switch (cfg.truth_kind) {
    case TruthKind::kPowerlaw: {
      auto u = std::make_shared<SpectralFunction>(make_powerlaw_truth(cfg.d, cfg.s, cfg.z_truth));
      t.source = std::make_shared<SpectralFunction>(forward_map(*u, cfg.V));
      t.spectral = u;
      t.solution = u;
      return t;
    }
    case TruthKind::kPolynomialPairs:
      t.solution = std::make_shared<PolynomialPairs>(cfg.d);
      break;
    case TruthKind::kRandomTeacher: {
      std::vector<int> widths{cfg.d};
      for (int l = 0; l < cfg.teacher_depth; ++l) widths.push_back(cfg.teacher_width);
      widths.push_back(1);
      t.solution = std::make_shared<Relu3Network>(
          he_init(widths, hash_seed({cfg.base_seed, 0x7eac4e5ULL}), BoundaryMode::kHardMultiplier));
      break;
    }
  }
  t.source = std::make_shared<PdeSource>(t.solution, cfg.V);
  return t;
}

SampleSet gradient_points(const ExperimentConfig& cfg, std::int64_t n, std::uint64_t seed) {
  const std::size_t count = mdrm_gradient_size(static_cast<std::size_t>(n), cfg.d, cfg.s);
  SampleSet g;
  g.dimension = cfg.d;
  g.seed = hash_seed({seed, 1});
  g.points = draw_points(cfg.d, count, g.seed);
  g.values.assign(count, 0.0);
  return g;
}

struct Estimate {
  std::optional<SpectralFunction> spectral;
  std::optional<Relu3Network> network;
  std::vector<TracePoint> trace;

  const PointEvaluator& evaluator() const {
    if (spectral) return *spectral;
    return *network;
  }
};

Estimate fit_estimate(const ExperimentConfig& cfg, const Truth& truth, std::int64_t n, int cutoff,
                      std::uint64_t seed) {
  const SampleSet samples = draw_samples(*truth.source, static_cast<std::size_t>(n), seed, cfg.sigma);
  Estimate est;
  if (cfg.estimator == EstimatorKind::kFourier) {
    switch (cfg.objective) {
      case Objective::kDrm:
        est.spectral = fit_drm(samples, cutoff, cfg.V, cfg.ridge);
        break;
      case Objective::kPinn:
        est.spectral = fit_pinn(samples, cutoff, cfg.V);
        break;
      case Objective::kMdrm:
        est.spectral =
            fit_mdrm(MdrmSplit{gradient_points(cfg, n, seed), samples}, cutoff, cfg.V, cfg.ridge);
        break;
    }
    return est;
  }

  std::vector<int> widths{cfg.d};
  for (int l = 0; l < cfg.net_depth; ++l) widths.push_back(cfg.net_width);
  widths.push_back(1);
  Relu3Network net = he_init(widths, hash_seed({seed, 2}), cfg.bc_mode);
  TrainConfig tc;
  tc.optimizer = cfg.optimizer;
  tc.step_size = cfg.step_size;
  tc.iterations = cfg.iterations;
  tc.batch_size = cfg.batch_size;
  tc.seed = hash_seed({seed, 4});
  std::optional<MdrmSplit> split;
  if (cfg.objective == Objective::kMdrm) split.emplace(MdrmSplit{gradient_points(cfg, n, seed), samples});
  const LossData data = split ? LossData::mdrm(*split) : LossData::of(cfg.objective, samples);
  TrainResult trained = train(std::move(net), data, cfg.V, tc);
  est.network = std::move(trained.network);
  est.trace = std::move(trained.trace);
  return est;
}

double estimate_error(const ExperimentConfig& cfg, const Truth& truth, const Estimate& est,
                      int order, std::uint64_t seed) {
  if (est.spectral && truth.spectral) return spectral_error(*est.spectral, *truth.spectral, order);
  return mc_error(est.evaluator(), *truth.solution, order, cfg.mc_points, hash_seed({seed, 3})).value;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace

ScalingResult run_experiment(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const Truth truth = make_truth(cfg);
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  ScalingResult result;
  result.config = cfg;
  result.rows.resize(cfg.n_grid.size());
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    auto& row = result.rows[i];
    row.n = cfg.n_grid[i];
    row.cutoff = cfg.estimator == EstimatorKind::kFourier ? cutoff_for(cfg, row.n) : 0;
    row.replicates.resize(reps);
  }

  parallel_for(cfg.n_grid.size() * reps, threads, [&](std::size_t task) {
    auto& row = result.rows[task / reps];
    const int r = static_cast<int>(task % reps);
    ReplicateOutcome& out = row.replicates[static_cast<std::size_t>(r)];
    out.replicate = r;
    out.seed = replicate_seed(cfg.base_seed, row.n, r);
    out.error = std::numeric_limits<double>::quiet_NaN();
    try {
      const Estimate est = fit_estimate(cfg, truth, row.n, row.cutoff, out.seed);
      out.error = estimate_error(cfg, truth, est, cfg.error_order, out.seed);
      if (!std::isfinite(out.error)) out.failure = "non-finite error";
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
  });

  std::vector<PowerLawPoint> squared;
  std::vector<PowerLawPoint> norm;
  for (auto& row : result.rows) {
    std::vector<double> ok;
    for (const auto& rep : row.replicates) {
      if (rep.failure.empty()) ok.push_back(rep.error);
    }
    if (ok.empty()) {
      throw NumericError("all " + std::to_string(reps) + " replicates failed at n=" +
                             std::to_string(row.n) + "; first failure: " +
                             row.replicates.front().failure,
                         -1);
    }
    row.error = aggregate_errors(ok, cfg.aggregate);
    norm.push_back({static_cast<double>(row.n), row.error});
    squared.push_back({static_cast<double>(row.n), row.error * row.error});
  }
  result.fit = fit_powerlaw(squared);
  result.norm_fit = fit_powerlaw(norm);
  return result;
}

SingleFit fit_single(const ExperimentConfig& cfg, std::int64_t n, int replicate) {
  cfg.validate();
  if (n < 1) throw ConfigError("n must be >= 1");
  const Truth truth = make_truth(cfg);
  SingleFit out;
  out.n = n;
  out.replicate = replicate;
  out.seed = replicate_seed(cfg.base_seed, n, replicate);
  out.cutoff = cfg.estimator == EstimatorKind::kFourier ? cutoff_for(cfg, n) : 0;
  Estimate est = fit_estimate(cfg, truth, n, out.cutoff, out.seed);
  for (int order = 0; order <= 2; ++order) {
    out.errors[static_cast<std::size_t>(order)] = estimate_error(cfg, truth, est, order, out.seed);
  }
  out.spectral = std::move(est.spectral);
  out.network = std::move(est.network);
  out.trace = std::move(est.trace);
  return out;
}

DimensionLaw fit_dimension_law(std::span<const DimensionPoint> points) {
  if (points.size() < 2) throw DomainError("dimension law needs at least 2 dimensions");
  const double m = static_cast<double>(points.size());
  double xbar = 0.0;
  double ybar = 0.0;
  for (const auto& p : points) {
    if (p.slope == 0.0) throw DomainError("dimension law: zero slope at d=" + std::to_string(p.d));
    xbar += p.d;
    ybar += 1.0 / std::abs(p.slope);
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    const double y = 1.0 / std::abs(p.slope);
    sxx += (p.d - xbar) * (p.d - xbar);
    sxy += (p.d - xbar) * (y - ybar);
    syy += (y - ybar) * (y - ybar);
  }
  if (!(sxx > 0.0)) throw DomainError("dimension law needs at least 2 distinct dimensions");
  DimensionLaw law;
  law.points.assign(points.begin(), points.end());
  law.a = sxy / sxx;
  law.b = ybar - law.a * xbar;
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double r = 1.0 / std::abs(p.slope) - (law.a * p.d + law.b);
    ss_res += r * r;
  }
  law.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return law;
}

DimensionLaw dimension_sweep(std::span<const ExperimentConfig> cfgs, int threads) {
  if (cfgs.size() < 2) throw DomainError("dimension sweep needs at least 2 dimensions");
  std::vector<DimensionPoint> points;
  for (const auto& cfg : cfgs) {
    const ScalingResult r = run_experiment(cfg, threads);
    points.push_back({cfg.d, r.fit.slope, r.fit.r2});
  }
  return fit_dimension_law(points);
}

void write_results_csv(std::ostream& os, const ScalingResult& result) {
  os << "n,replicate,error,seed\n";
  const auto old_precision = os.precision(17);
  for (const auto& row : result.rows) {
    for (const auto& rep : row.replicates) {
      os << row.n << ',' << rep.replicate << ',';
      if (rep.failure.empty()) {
        os << rep.error;
      } else {
        os << "nan";
      }
      os << ',' << rep.seed << '\n';
    }
  }
  os.precision(old_precision);
}

nlohmann::json summary_json(const ScalingResult& result) {
  nlohmann::json j;
  j["error_convention"] = "squared";
  j["slope"] = result.fit.slope;
  j["intercept"] = result.fit.intercept;
  j["r2"] = result.fit.r2;
  j["norm_slope"] = result.norm_fit.slope;
  j["norm_intercept"] = result.norm_fit.intercept;
  j["norm_r2"] = result.norm_fit.r2;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["cutoff"] = row.cutoff;
    r["error"] = row.error;
    r["squared_error"] = row.error * row.error;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& rep : row.replicates) {
      if (!rep.failure.empty()) failures.push_back({{"replicate", rep.replicate}, {"reason", rep.failure}});
    }
    r["failures"] = failures;
    rows.push_back(r);
  }
  j["rows"] = rows;
  j["config"] = config_to_json(result.config);
  return j;
}

void write_plot_svg(std::ostream& os, const ScalingResult& result) {
  constexpr double kW = 640.0;
  constexpr double kH = 420.0;
  constexpr double kMargin = 60.0;
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& row : result.rows) {
    lx.push_back(std::log10(static_cast<double>(row.n)));
    ly.push_back(std::log10(row.error * row.error));
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(lx.begin(), lx.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(ly.begin(), ly.end());
  const double x0 = *xmin_it - 0.1;
  const double x1 = *xmax_it + 0.1;
  const double y0 = *ymin_it - 0.2;
  const double y1 = *ymax_it + 0.2;
  auto px = [&](double v) { return kMargin + (v - x0) / (x1 - x0) * (kW - 2 * kMargin); };
  auto py = [&](double v) { return kH - kMargin - (v - y0) / (y1 - y0) * (kH - 2 * kMargin); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin
     << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
     << kH - kMargin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">log10 n</text>\n";
  os << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 " << kH / 2
     << ")\" text-anchor=\"middle\">log10 error^2</text>\n";
  const double ln10 = std::log(10.0);
  const double a = result.fit.intercept / ln10;
  const double b = result.fit.slope;
  os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(a + b * x0) << "\" x2=\"" << px(x1)
     << "\" y2=\"" << py(a + b * x1) << "\" stroke=\"steelblue\" stroke-dasharray=\"6,4\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    os << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i]) << "\" r=\"4\" fill=\"crimson\"/>\n";
  }
  os << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin - 10 << "\">slope " << result.fit.slope
     << ", R^2 " << result.fit.r2 << "</text>\n";
  os << "</svg>\n";
}

}  // namespace pdelearn
