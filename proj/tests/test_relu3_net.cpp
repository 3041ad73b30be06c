#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "pdelearn/errors.hpp"
#include "pdelearn/metrics.hpp"
#include "pdelearn/relu3_net.hpp"
#include "pdelearn/rng.hpp"

using namespace pdelearn;

namespace {

Relu3Network perturbed(std::vector<int> widths, std::uint64_t seed, BoundaryMode bc) {
  Relu3Network net = he_init(std::move(widths), seed, bc);
  const CounterRng rng(seed, 77);
  for (std::size_t i = 0; i < net.parameters().size(); ++i) net.parameters()[i] += 0.1 * rng.normal(i);
  return net;
}

double boundary(std::span<const double> x) {
  double b = 1.0;
  for (double t : x) b *= 4.0 * t * (1.0 - t);
  return b;
}

}  // namespace

TEST(Relu3Net, ActivationValues) {
  EXPECT_EQ(relu3(-1.0), 0.0);
  EXPECT_EQ(relu3(0.0), 0.0);
  EXPECT_DOUBLE_EQ(relu3(2.0), 8.0);
  EXPECT_DOUBLE_EQ(relu3_d1(2.0), 12.0);
  EXPECT_DOUBLE_EQ(relu3_d2(2.0), 12.0);
  EXPECT_EQ(relu3_d1(-0.5), 0.0);
  EXPECT_EQ(relu3_d2(-0.5), 0.0);
}

TEST(Relu3Net, ZeroWeightsGiveBiasTimesMultiplier) {
  Relu3Network net({1, 4, 1}, BoundaryMode::kHardMultiplier);
  const double b = 0.75;
  net.parameters()[net.bias_offset(net.depth() - 1)] = b;
  const double mid[] = {0.5};
  EXPECT_DOUBLE_EQ(net.value(mid), b);
  EXPECT_NEAR(net.laplacian(mid), -8.0 * b, 1e-12);
  Relu3Network net2({2, 3, 1}, BoundaryMode::kHardMultiplier);
  net2.parameters()[net2.bias_offset(1)] = b;
  const double c[] = {0.5, 0.5};
  EXPECT_NEAR(net2.laplacian(c), -16.0 * b, 1e-12);
  const double x[] = {0.2, 0.7};
  EXPECT_NEAR(net2.value(x), b * boundary(x), 1e-15);
}

TEST(Relu3Net, HardMultiplierVanishesOnBoundary) {
  const Relu3Network net = perturbed({2, 6, 6, 1}, 3, BoundaryMode::kHardMultiplier);
  for (double t : {0.0, 0.3, 1.0}) {
    const double a[] = {0.0, t}, b[] = {1.0, t}, c[] = {t, 0.0}, e[] = {t, 1.0};
    EXPECT_EQ(net.value(a), 0.0);
    EXPECT_EQ(net.value(b), 0.0);
    EXPECT_EQ(net.value(c), 0.0);
    EXPECT_EQ(net.value(e), 0.0);
  }
}

TEST(Relu3Net, InputDerivativesMatchFiniteDifferences) {
  for (BoundaryMode bc : {BoundaryMode::kHardMultiplier, BoundaryMode::kNone}) {
    for (int d : {1, 3}) {
      const Relu3Network net = perturbed({d, 7, 5, 1}, 10 + d, bc);
      auto f = [&](std::span<const double> x) { return net.value(x); };
      const std::vector<double> x = draw_points(d, 1, 5);
      std::vector<double> g(d);
      net.gradient(x, g);
      for (int j = 0; j < d; ++j) {
        EXPECT_NEAR(g[j], oracle::central_diff(f, x, j, 1e-5), 1e-6 * std::max(1.0, std::abs(g[j])));
      }
      const double lap = net.laplacian(x);
      EXPECT_NEAR(lap, oracle::fd_laplacian(f, x, 1e-4), 1e-4 * std::max(1.0, std::abs(lap)));
    }
  }
}

TEST(Relu3Net, BatchMatchesPointwise) {
  const Relu3Network net = perturbed({2, 8, 8, 1}, 4, BoundaryMode::kHardMultiplier);
  const auto pts = draw_points(2, 300, 9);
  BatchJet jet;
  net.evaluate_batch(pts, Derivatives::kLaplacian, jet);
  for (std::size_t i = 0; i < 300; i += 37) {
    const std::span<const double> x(pts.data() + 2 * i, 2);
    double g[2];
    net.gradient(x, g);
    EXPECT_NEAR(jet.value[i], net.value(x), 1e-13);
    EXPECT_NEAR(jet.grad[2 * i], g[0], 1e-12);
    EXPECT_NEAR(jet.laplacian[i], net.laplacian(x), 1e-11);
  }
}

TEST(Relu3Net, DrmBiasGradientByHand) {
  // Only the output bias is nonzero, so u = b B(x) and
  // dL/db = mean[b |grad B|^2 + V b B^2 - f B].
  Relu3Network net({2, 3, 1}, BoundaryMode::kHardMultiplier);
  const double b = 0.4;
  const double V = 1.5;
  net.parameters()[net.bias_offset(1)] = b;
  const SpectralFunction f(2, {{FrequencyIndex{1, 1}, 1.0}});
  const SampleSet s = draw_samples(f, 50, 2, 0.0);
  double want = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto x = s.point(j);
    const double B = boundary(x);
    const double g0 = 4.0 * (1 - 2 * x[0]) * 4.0 * x[1] * (1 - x[1]);
    const double g1 = 4.0 * (1 - 2 * x[1]) * 4.0 * x[0] * (1 - x[0]);
    want += b * (g0 * g0 + g1 * g1) + V * b * B * B - s.values[j] * B;
  }
  want /= s.size();
  const LossGradient lg = loss_param_grad(net, LossData::drm(s), V);
  EXPECT_NEAR(lg.gradient[net.bias_offset(1)], want, 1e-12);
  EXPECT_NEAR(lg.loss, drm_empirical(net, s, V), 1e-13);
}

TEST(Relu3Net, ParameterGradientsMatchFiniteDifferences) {
  const Relu3Network net = perturbed({2, 5, 4, 1}, 8, BoundaryMode::kHardMultiplier);
  const SpectralFunction f(2, {{FrequencyIndex{1, 2}, 1.0}});
  const SampleSet s = draw_samples(f, 20, 1, 0.0);
  const MdrmSplit split{draw_samples(f, 30, 2, 0.0), s};
  const double V = 1.0;
  const LossData datas[] = {LossData::drm(s), LossData::pinn(s), LossData::mdrm(split)};
  for (const LossData& data : datas) {
    auto loss = [&](const Relu3Network& n) {
      switch (data.objective()) {
        case Objective::kDrm: return drm_empirical(n, s, V);
        case Objective::kPinn: return pinn_empirical(n, s, V);
        case Objective::kMdrm: return mdrm_empirical(n, split, V);
      }
      return 0.0;
    };
    const LossGradient lg = loss_param_grad(net, data, V);
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < lg.gradient.size(); ++i) {
      Relu3Network p = net, m = net;
      p.parameters()[i] += 1e-6;
      m.parameters()[i] -= 1e-6;
      const double fd = (loss(p) - loss(m)) / 2e-6;
      diff += (fd - lg.gradient[i]) * (fd - lg.gradient[i]);
      norm += lg.gradient[i] * lg.gradient[i];
    }
    EXPECT_LT(std::sqrt(diff / norm), 1e-5) << objective_name(data.objective());
  }
}

TEST(Relu3Net, LossDataOfRejectsMdrm) {
  SampleSet s;
  EXPECT_THROW(LossData::of(Objective::kMdrm, s), DomainError);
  EXPECT_EQ(LossData::of(Objective::kPinn, s).objective(), Objective::kPinn);
}

TEST(Relu3Net, HeInitVariance) {
  const Relu3Network net = he_init({50, 200, 1}, 1);
  const std::size_t w0 = net.weight_offset(0);
  const std::size_t count = 50 * 200;
  double m2 = 0.0;
  for (std::size_t i = 0; i < count; ++i) m2 += net.parameters()[w0 + i] * net.parameters()[w0 + i];
  EXPECT_NEAR(m2 / count, 2.0 / 50, 0.003);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_EQ(net.parameters()[net.bias_offset(0) + i], 0.0);
}

TEST(Relu3Net, RejectsBadShapes) {
  EXPECT_THROW(Relu3Network({2, 1}, BoundaryMode::kNone), DomainError);
  EXPECT_THROW(Relu3Network({2, 4, 2}, BoundaryMode::kNone), DomainError);
  EXPECT_THROW(parse_boundary_mode("soft"), ConfigError);
}

TEST(Relu3Net, ZeroStepLeavesParametersAndIterationsMustBePositive) {
  const Relu3Network net = perturbed({1, 6, 1}, 2, BoundaryMode::kHardMultiplier);
  const SpectralFunction f(1, {{FrequencyIndex{1}, 1.0}});
  const SampleSet s = draw_samples(f, 64, 1, 0.0);
  TrainConfig cfg;
  cfg.step_size = 0.0;
  cfg.iterations = 50;
  const TrainResult r = train(net, LossData::drm(s), 1.0, cfg);
  for (std::size_t i = 0; i < net.parameters().size(); ++i) {
    EXPECT_EQ(r.network.parameters()[i], net.parameters()[i]);
  }
  cfg.iterations = 0;
  EXPECT_THROW(train(net, LossData::drm(s), 1.0, cfg), DomainError);
}

TEST(Relu3Net, TrainingIsDeterministicAndBestLossNonIncreasing) {
  const Relu3Network net = he_init({1, 10, 10, 1}, 5);
  const SpectralFunction f(1, {{FrequencyIndex{1}, 1.0}});
  const SampleSet s = draw_samples(f, 200, 1, 0.0);
  TrainConfig cfg;
  cfg.iterations = 300;
  cfg.eval_every = 20;
  cfg.seed = 3;
  const TrainResult a = train(net, LossData::drm(s), 1.0, cfg);
  const TrainResult b = train(net, LossData::drm(s), 1.0, cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].loss, b.trace[i].loss);
  for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_LE(a.trace[i].best_loss, a.trace[i - 1].best_loss);
  EXPECT_EQ(a.trace.back().step, 300);
  EXPECT_EQ(drm_empirical(a.network, s, 1.0), a.trace.back().best_loss);
}

TEST(Relu3Net, LearnsASingleModeUnderEachObjective) {
  const double pi = std::numbers::pi;
  const SpectralFunction truth(1, {{FrequencyIndex{1}, 1.0}});
  const SpectralFunction f(1, {{FrequencyIndex{1}, pi * pi + 1.0}});
  const SampleSet s = draw_samples(f, 1000, 1, 0.0);
  const MdrmSplit split{draw_samples(f, 2000, 2, 0.0), s};
  const Relu3Network net = he_init({1, 16, 16, 1}, 7);
  const double before = mc_error(net, truth, 1, 20000, 9).value;
  TrainConfig cfg;
  cfg.iterations = 3000;
  const LossData datas[] = {LossData::drm(s), LossData::pinn(s), LossData::mdrm(split)};
  for (const LossData& data : datas) {
    const TrainResult r = train(net, data, 1.0, cfg);
    const double after = mc_error(r.network, truth, 1, 20000, 9).value;
    EXPECT_LT(after, 0.5 * before) << objective_name(data.objective());
  }
}

TEST(Relu3Net, CheckpointRoundTripIsExact) {
  const Relu3Network net = perturbed({3, 4, 2, 1}, 6, BoundaryMode::kNone);
  std::stringstream ss;
  write_checkpoint(ss, net);
  const Relu3Network back = read_checkpoint(ss);
  EXPECT_EQ(back.widths(), net.widths());
  EXPECT_EQ(back.boundary(), net.boundary());
  for (std::size_t i = 0; i < net.parameters().size(); ++i) EXPECT_EQ(back.parameters()[i], net.parameters()[i]);
  std::stringstream bad("not a checkpoint");
  EXPECT_THROW(read_checkpoint(bad), DomainError);
}

TEST(Relu3Net, TraceCsvHeader) {
  std::ostringstream os;
  write_trace_csv(os, {{0, 1.0, 1.0}});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "step,loss,best_loss");
}
