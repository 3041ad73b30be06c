#pragma once

// Sample-size sweeps, replicate aggregation and log-log power-law fits.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdelearn/objectives.hpp"
#include "pdelearn/point_evaluator.hpp"
#include "pdelearn/relu3_net.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn {

enum class TruthKind { kPowerlaw, kPolynomialPairs, kRandomTeacher };
enum class EstimatorKind { kFourier, kRelu3 };
enum class Aggregate { kMedian, kMean };
enum class XiRule { kTheory, kFixed };

struct ExperimentConfig {
  int d = 2;
  double s = 4.0;
  TruthKind truth_kind = TruthKind::kPowerlaw;
  Objective objective = Objective::kDrm;
  EstimatorKind estimator = EstimatorKind::kFourier;
  XiRule xi_rule = XiRule::kTheory;
  int xi = 0;  // used when xi_rule is kFixed
  std::vector<std::int64_t> n_grid{80, 320, 1280, 5120, 20480};
  int replicates = 5;
  Aggregate aggregate = Aggregate::kMedian;
  double sigma = 0.0;
  std::uint64_t base_seed = 0;
  int error_order = 1;
  double V = 1.0;
  int z_truth = 8;  // powerlaw truth keeps ||z||_inf <= z_truth
  double ridge = 1e-10;
  // relu3 estimator
  int net_depth = 3;  // hidden layers
  int net_width = 50;
  BoundaryMode bc_mode = BoundaryMode::kHardMultiplier;
  Optimizer optimizer = Optimizer::kAdaptiveMoment;
  double step_size = 1e-3;
  int iterations = 20'000;
  int batch_size = 0;
  std::size_t mc_points = 100'000;
  // random_teacher truth
  int teacher_depth = 3;  // hidden layers
  int teacher_width = 50;

  void validate() const;
};

// Flat JSON object keyed by the field names above; enums as strings
// (truth_kind: powerlaw|polynomial_pairs|random_teacher, objective: DRM|MDRM|PINN,
// estimator: fourier|relu3, xi_rule: theory|fixed, aggregate: median|mean,
// bc_mode: hard_multiplier|none, optimizer: adam|sgd). Unknown keys throw
// ConfigError unless listed in `extra_keys`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::set<std::string>& extra_keys = {});
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Truncation level for sample size n: fixed xi, or round(n^(1/(d+2s-2))) for
// DRM and round(n^(1/(d+2s-4))) for MDRM/PINN, at least 1.
int cutoff_for(const ExperimentConfig& cfg, std::int64_t n);

std::uint64_t replicate_seed(std::uint64_t base_seed, std::int64_t n, int replicate);

// -Lap u + V u for a truth with exact second derivatives. Only value() is defined.
class PdeSource final : public PointEvaluator {
 public:
  PdeSource(std::shared_ptr<const PointEvaluator> truth, double potential)
      : truth_(std::move(truth)), potential_(potential) {}
  int dimension() const override { return truth_->dimension(); }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  double laplacian(std::span<const double> x) const override;
  void evaluate_batch(std::span<const double> points, Derivatives need,
                      BatchJet& out) const override;

 private:
  std::shared_ptr<const PointEvaluator> truth_;
  double potential_;
};

// u(x) = x_1 x_2 + x_3 x_4 + ... (d even).
class PolynomialPairs final : public PointEvaluator {
 public:
  explicit PolynomialPairs(int dimension);
  int dimension() const override { return d_; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  double laplacian(std::span<const double> x) const override;

 private:
  int d_;
};

struct ReplicateOutcome {
  int replicate;
  std::uint64_t seed;
  double error;  // NaN when the replicate failed
  std::string failure;
};

struct ScalingRow {
  std::int64_t n;
  int cutoff;  // 0 for the network estimator
  double error;  // aggregated over successful replicates
  std::vector<ReplicateOutcome> replicates;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Rows carry norm errors. `fit` is the squared-norm convention (the slope of
// log(error^2) on log n); `norm_fit` is the slope of log(error) on log n.
struct ScalingResult {
  ExperimentConfig config;
  std::vector<ScalingRow> rows;
  PowerLawFit fit;
  PowerLawFit norm_fit;
};

struct PowerLawPoint {
  double n;
  double error;
};

// OLS of log(error) on log(n). R^2 is 1 when the errors are all equal.
PowerLawFit fit_powerlaw(std::span<const PowerLawPoint> rows);

double aggregate_errors(std::vector<double> errors, Aggregate how);

// threads = 0 uses the hardware concurrency.
ScalingResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

struct SingleFit {
  std::int64_t n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  int cutoff = 0;
  std::array<double, 3> errors{};  // orders 0, 1, 2
  std::optional<SpectralFunction> spectral;
  std::optional<Relu3Network> network;
  std::vector<TracePoint> trace;
};

// One replicate of the experiment at sample size n, with errors of every order.
SingleFit fit_single(const ExperimentConfig& cfg, std::int64_t n, int replicate = 0);

struct DimensionPoint {
  int d;
  double slope;
  double r2;
};

struct DimensionLaw {
  std::vector<DimensionPoint> points;
  double a = 0.0;  // 1/|slope| = a d + b
  double b = 0.0;
  double r2 = 0.0;
};

DimensionLaw fit_dimension_law(std::span<const DimensionPoint> points);
// Squared-norm slopes per dimension, then the linear fit of 1/|slope| on d.
DimensionLaw dimension_sweep(std::span<const ExperimentConfig> cfgs, int threads = 0);

// CSV with header n,replicate,error,seed (failed replicates have error nan).
void write_results_csv(std::ostream& os, const ScalingResult& result);
nlohmann::json summary_json(const ScalingResult& result);
// Log-log plot of the aggregated squared errors with the fitted line.
void write_plot_svg(std::ostream& os, const ScalingResult& result);

}  // namespace pdelearn
