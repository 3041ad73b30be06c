#pragma once

// Dense feed-forward network with eta(t) = max(t, 0)^3 hidden activations.
//
// Input derivatives are exact: alongside the value, d first-order and d
// second-order directional derivative channels are pushed through every
// layer (eta is C^2), and the Laplacian is the sum of the second-order
// channels. Parameter gradients of the training losses are obtained by
// reverse-mode propagation through all of those channels.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pdelearn/objectives.hpp"
#include "pdelearn/point_evaluator.hpp"
#include "pdelearn/sampling.hpp"

namespace pdelearn {

enum class BoundaryMode {
  kHardMultiplier,  // emit B(x) * net(x), B(x) = prod_j 4 x_j (1 - x_j)
  kNone,
};

std::string_view boundary_mode_name(BoundaryMode mode);
BoundaryMode parse_boundary_mode(std::string_view name);

class Relu3Network final : public PointEvaluator {
 public:
  // widths = {d, W, ..., W, 1}; at least one hidden layer. Parameters start at zero.
  Relu3Network(std::vector<int> widths, BoundaryMode boundary);

  int dimension() const override { return widths_.front(); }
  const std::vector<int>& widths() const { return widths_; }
  // Number of affine layers.
  int depth() const { return static_cast<int>(widths_.size()) - 1; }
  BoundaryMode boundary() const { return boundary_; }

  // Per layer: weights (out x in, row-major) followed by biases (out).
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::size_t bias_offset(int layer) const;

  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  double laplacian(std::span<const double> x) const override;
  // Throws NumericError naming the layer when a pre-activation is not finite.
  void evaluate_batch(std::span<const double> points, Derivatives need,
                      BatchJet& out) const override;

 private:
  std::vector<int> widths_;
  BoundaryMode boundary_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// Scalar activation and its first two derivatives.
double relu3(double t);
double relu3_d1(double t);
double relu3_d2(double t);

// Weights ~ Normal(0, 2 / fan_in), biases 0, from the counter generator.
Relu3Network he_init(std::vector<int> widths, std::uint64_t seed,
                     BoundaryMode boundary = BoundaryMode::kHardMultiplier);

// Training data for one of the three objectives. Holds references only.
class LossData {
 public:
  static LossData drm(const SampleSet& samples) { return {Objective::kDrm, &samples, nullptr}; }
  static LossData pinn(const SampleSet& samples) { return {Objective::kPinn, &samples, nullptr}; }
  static LossData mdrm(const MdrmSplit& split) { return {Objective::kMdrm, nullptr, &split}; }
  static LossData of(Objective objective, const SampleSet& samples);

  Objective objective() const { return objective_; }
  const SampleSet& samples() const;
  const MdrmSplit& split() const;

 private:
  LossData(Objective o, const SampleSet* s, const MdrmSplit* m)
      : objective_(o), samples_(s), split_(m) {}
  Objective objective_;
  const SampleSet* samples_;
  const MdrmSplit* split_;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // aligned with Relu3Network::parameters()
};

// Empirical loss of the objectives module and its exact parameter gradient.
LossGradient loss_param_grad(const Relu3Network& net, const LossData& data, double potential);

enum class Optimizer { kPlainSgd, kAdaptiveMoment };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdaptiveMoment;
  double step_size = 1e-3;
  int iterations = 20'000;
  int batch_size = 0;  // 0 selects min(n, 128)
  std::uint64_t seed = 0;
  int eval_every = 100;
};

struct TracePoint {
  int step;
  double loss;
  double best_loss;
};

struct TrainResult {
  Relu3Network network;
  std::vector<TracePoint> trace;
  int best_step = 0;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<TracePoint> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  std::vector<TracePoint> trace_;
};

// Minibatch first-order training. Minibatches are drawn without replacement
// and reshuffled every epoch from cfg.seed; the full-data loss is recorded
// every cfg.eval_every steps and the best recorded parameters are returned.
TrainResult train(Relu3Network net, const LossData& data, double potential,
                  const TrainConfig& cfg);

// Checkpoint: "pdelearn-relu3 1", boundary mode, widths, flat parameters.
void write_checkpoint(std::ostream& os, const Relu3Network& net);
Relu3Network read_checkpoint(std::istream& is);
// CSV with header step,loss,best_loss
void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace);

}  // namespace pdelearn
