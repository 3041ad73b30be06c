#include "pdelearn/relu3_net.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "pdelearn/errors.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/simd/kernels.hpp"

namespace pdelearn {

std::string_view boundary_mode_name(BoundaryMode mode) {
  return mode == BoundaryMode::kHardMultiplier ? "hard_multiplier" : "none";
}

BoundaryMode parse_boundary_mode(std::string_view name) {
  if (name == "hard_multiplier") return BoundaryMode::kHardMultiplier;
  if (name == "none") return BoundaryMode::kNone;
  throw ConfigError("unknown bc_mode '" + std::string(name) + "'");
}

double relu3(double t) { return t > 0.0 ? t * t * t : 0.0; }
double relu3_d1(double t) { return t > 0.0 ? 3.0 * t * t : 0.0; }
double relu3_d2(double t) { return t > 0.0 ? 6.0 * t : 0.0; }

Relu3Network::Relu3Network(std::vector<int> widths, BoundaryMode boundary)
    : widths_(std::move(widths)), boundary_(boundary) {
  if (widths_.size() < 3) throw DomainError("network needs input, >= 1 hidden and output widths");
  if (widths_.back() != 1) throw DomainError("network output width must be 1");
  for (int w : widths_) {
    if (w < 1) throw DomainError("network widths must be >= 1");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(total);
    const auto in = static_cast<std::size_t>(widths_[l]);
    const auto out = static_cast<std::size_t>(widths_[l + 1]);
    total += out * in + out;
  }
  params_.assign(total, 0.0);
}

std::size_t Relu3Network::bias_offset(int layer) const {
  const auto l = static_cast<std::size_t>(layer);
  return offsets_[l] + static_cast<std::size_t>(widths_[l + 1]) * static_cast<std::size_t>(widths_[l]);
}

namespace {

// Per-batch forward state. Columns of every activation matrix are grouped
// by channel: [value | d first-order tangents | d second-order tangents],
// `count` columns per channel.
struct Engine {
  std::size_t d = 0;
  std::size_t count = 0;
  std::size_t cols = 0;
  bool with_grad = false;
  bool with_lap = false;
  std::vector<std::vector<double>> a;   // input of layer l: widths[l] x cols
  std::vector<std::vector<double>> z;   // output of layer l: widths[l+1] x cols
  std::vector<std::vector<double>> s1;  // hidden layers: widths[l+1] x count
  std::vector<std::vector<double>> s2;
  std::vector<std::vector<double>> s3;
  std::vector<double> g;
  std::vector<double> g_prev;
  std::vector<double> abar;
  std::vector<double> wt;

  std::size_t tangent(std::size_t k) const { return (1 + k) * count; }
  std::size_t second(std::size_t k) const { return (1 + d + k) * count; }
};

void forward(const Relu3Network& net, std::span<const double> points, std::size_t count,
             Derivatives need, Engine& e) {
  const auto& k = simd::active();
  const auto& widths = net.widths();
  const int depth = net.depth();
  e.d = static_cast<std::size_t>(widths.front());
  e.count = count;
  e.with_grad = need != Derivatives::kValue;
  e.with_lap = need == Derivatives::kLaplacian;
  const std::size_t channels = 1 + (e.with_grad ? e.d : 0) + (e.with_lap ? e.d : 0);
  e.cols = channels * count;
  e.a.resize(static_cast<std::size_t>(depth));
  e.z.resize(static_cast<std::size_t>(depth));
  e.s1.resize(static_cast<std::size_t>(depth));
  e.s2.resize(static_cast<std::size_t>(depth));
  e.s3.resize(static_cast<std::size_t>(depth));

  auto& a0 = e.a[0];
  a0.assign(e.d * e.cols, 0.0);
  for (std::size_t b = 0; b < count; ++b) {
    for (std::size_t j = 0; j < e.d; ++j) {
      a0[j * e.cols + b] = points[b * e.d + j];
      if (e.with_grad) a0[j * e.cols + e.tangent(j) + b] = 1.0;
    }
  }

  const auto params = net.parameters();
  for (int l = 0; l < depth; ++l) {
    const auto li = static_cast<std::size_t>(l);
    const auto in = static_cast<std::size_t>(widths[li]);
    const auto out = static_cast<std::size_t>(widths[li + 1]);
    const double* w = params.data() + net.weight_offset(l);
    const double* bias = params.data() + net.bias_offset(l);
    auto& z = e.z[li];
    z.resize(out * e.cols);
    k.gemm(w, in, e.a[li].data(), e.cols, z.data(), e.cols, out, in, e.cols, false);
    for (std::size_t r = 0; r < out; ++r) {
      double* zr = z.data() + r * e.cols;
      for (std::size_t b = 0; b < count; ++b) zr[b] += bias[r];
    }
    for (double v : z) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite pre-activation in layer " + std::to_string(l), l);
      }
    }
    if (l + 1 == depth) break;

    auto& next = e.a[li + 1];
    next.resize(out * e.cols);
    auto& s1 = e.s1[li];
    auto& s2 = e.s2[li];
    auto& s3 = e.s3[li];
    s1.resize(out * count);
    s2.resize(out * count);
    s3.resize(out * count);
    for (std::size_t r = 0; r < out; ++r) {
      const double* zr = z.data() + r * e.cols;
      double* ar = next.data() + r * e.cols;
      double* r1 = s1.data() + r * count;
      double* r2 = s2.data() + r * count;
      k.relu3_jet(zr, ar, r1, r2, s3.data() + r * count, count);
      if (!e.with_grad) continue;
      for (std::size_t j = 0; j < e.d; ++j) {
        k.jet_forward(r1, r2, zr + e.tangent(j), e.with_lap ? zr + e.second(j) : nullptr,
                      ar + e.tangent(j), e.with_lap ? ar + e.second(j) : nullptr, count);
      }
    }
  }
}

// B(x) = prod_j 4 x_j (1 - x_j) with gradient and Laplacian; identity when
// the boundary mode is kNone.
struct BoundaryFactor {
  double value = 1.0;
  std::vector<double> grad;
  double laplacian = 0.0;
};

void boundary_factor(BoundaryMode mode, std::span<const double> x, BoundaryFactor& out) {
  const std::size_t d = x.size();
  out.grad.assign(d, 0.0);
  out.value = 1.0;
  out.laplacian = 0.0;
  if (mode == BoundaryMode::kNone) return;
  for (std::size_t j = 0; j < d; ++j) out.value *= 4.0 * x[j] * (1.0 - x[j]);
  for (std::size_t j = 0; j < d; ++j) {
    double others = 1.0;
    for (std::size_t m = 0; m < d; ++m) {
      if (m != j) others *= 4.0 * x[m] * (1.0 - x[m]);
    }
    out.grad[j] = 4.0 * (1.0 - 2.0 * x[j]) * others;
    out.laplacian += -8.0 * others;
  }
}

// Emitted value / gradient / Laplacian of sample b from the output row.
struct SampleJet {
  double n_value;
  double u;
  double lap_n;
  double lap_u;
};

void emitted_jet(const Engine& e, std::size_t b, const BoundaryFactor& bf, double* grad_n,
                 double* grad_u, SampleJet& out) {
  const std::vector<double>& z = e.z.back();
  out.n_value = z[b];
  out.u = bf.value * out.n_value;
  out.lap_n = 0.0;
  out.lap_u = 0.0;
  if (!e.with_grad) return;
  double cross = 0.0;
  for (std::size_t j = 0; j < e.d; ++j) {
    grad_n[j] = z[e.tangent(j) + b];
    grad_u[j] = bf.grad[j] * out.n_value + bf.value * grad_n[j];
    cross += bf.grad[j] * grad_n[j];
  }
  if (!e.with_lap) return;
  for (std::size_t j = 0; j < e.d; ++j) out.lap_n += z[e.second(j) + b];
  out.lap_u = bf.laplacian * out.n_value + 2.0 * cross + bf.value * out.lap_n;
}

// Reverse pass. e.g holds adjoints of the output row on entry.
void backward(const Relu3Network& net, Engine& e, std::span<double> grad_out) {
  const auto& k = simd::active();
  const auto& widths = net.widths();
  const auto params = net.parameters();
  for (int l = net.depth() - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const auto in = static_cast<std::size_t>(widths[li]);
    const auto out = static_cast<std::size_t>(widths[li + 1]);
    const auto& a = e.a[li];
    double* gw = grad_out.data() + net.weight_offset(l);
    double* gb = grad_out.data() + net.bias_offset(l);
    for (std::size_t r = 0; r < out; ++r) {
      const double* gr = e.g.data() + r * e.cols;
      for (std::size_t c = 0; c < in; ++c) gw[r * in + c] += k.dot(gr, a.data() + c * e.cols, e.cols);
      gb[r] += k.sum(gr, e.count);
    }
    if (l == 0) break;

    const double* w = params.data() + net.weight_offset(l);
    e.wt.resize(in * out);
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) e.wt[c * out + r] = w[r * in + c];
    }
    e.abar.resize(in * e.cols);
    k.gemm(e.wt.data(), out, e.g.data(), e.cols, e.abar.data(), e.cols, in, out, e.cols, false);

    // Through the activation of layer l-1, whose outputs have width `in`.
    const auto& zp = e.z[li - 1];
    const auto& s1 = e.s1[li - 1];
    const auto& s2 = e.s2[li - 1];
    const auto& s3 = e.s3[li - 1];
    e.g_prev.assign(in * e.cols, 0.0);
    for (std::size_t r = 0; r < in; ++r) {
      const double* zr = zp.data() + r * e.cols;
      const double* ab = e.abar.data() + r * e.cols;
      double* gp = e.g_prev.data() + r * e.cols;
      const double* r1 = s1.data() + r * e.count;
      const double* r2 = s2.data() + r * e.count;
      const double* r3 = s3.data() + r * e.count;
      k.mul(ab, r1, gp, e.count);
      if (!e.with_grad) continue;
      for (std::size_t j = 0; j < e.d; ++j) {
        const std::size_t t = e.tangent(j);
        const std::size_t s = e.with_lap ? e.second(j) : 0;
        k.jet_backward(r1, r2, r3, zr + t, e.with_lap ? zr + s : nullptr, ab + t,
                       e.with_lap ? ab + s : nullptr, gp, gp + t, e.with_lap ? gp + s : nullptr,
                       e.count);
      }
    }
    std::swap(e.g, e.g_prev);
  }
}

enum class Term { kDrm, kPinn, kGradOnly, kMassSource };

Derivatives term_needs(Term term) {
  switch (term) {
    case Term::kPinn:
      return Derivatives::kLaplacian;
    case Term::kMassSource:
      return Derivatives::kValue;
    default:
      return Derivatives::kGradient;
  }
}

// Adds weight * sum_b loss_b to the returned value and weight * d/dtheta to
// grad_out (if nonempty) for a block of points.
double accumulate_term(const Relu3Network& net, Term term, std::span<const double> points,
                       std::span<const double> values, double weight, double potential,
                       Engine& e, std::span<double> grad_out) {
  const std::size_t d = static_cast<std::size_t>(net.dimension());
  const std::size_t count = points.size() / d;
  forward(net, points, count, term_needs(term), e);

  const bool want_grad = !grad_out.empty();
  if (want_grad) e.g.assign(e.cols, 0.0);
  BoundaryFactor bf;
  std::vector<double> grad_n(d);
  std::vector<double> grad_u(d);
  SampleJet jet{};
  double total = 0.0;
  for (std::size_t b = 0; b < count; ++b) {
    boundary_factor(net.boundary(), points.subspan(b * d, d), bf);
    emitted_jet(e, b, bf, grad_n.data(), grad_u.data(), jet);
    const double f = values.empty() ? 0.0 : values[b];
    double g2 = 0.0;
    for (std::size_t j = 0; j < d && e.with_grad; ++j) g2 += grad_u[j] * grad_u[j];

    // Adjoints of (u, grad u, Lap u) for this sample.
    double ubar = 0.0;
    double gscale = 0.0;  // grad_u adjoint = gscale * grad_u
    double lbar = 0.0;
    switch (term) {
      case Term::kDrm:
        total += 0.5 * g2 + 0.5 * potential * jet.u * jet.u - f * jet.u;
        ubar = potential * jet.u - f;
        gscale = 1.0;
        break;
      case Term::kGradOnly:
        total += 0.5 * g2;
        gscale = 1.0;
        break;
      case Term::kMassSource:
        total += 0.5 * potential * jet.u * jet.u - f * jet.u;
        ubar = potential * jet.u - f;
        break;
      case Term::kPinn: {
        const double r = jet.lap_u - potential * jet.u + f;
        total += r * r;
        lbar = 2.0 * r;
        ubar = -2.0 * potential * r;
        break;
      }
    }
    if (!want_grad) continue;
    ubar *= weight;
    gscale *= weight;
    lbar *= weight;

    double nbar = ubar * bf.value + lbar * bf.laplacian;
    for (std::size_t j = 0; j < d && e.with_grad; ++j) {
      const double gbar = gscale * grad_u[j];
      nbar += gbar * bf.grad[j];
      e.g[e.tangent(j) + b] = gbar * bf.value + 2.0 * lbar * bf.grad[j];
      if (e.with_lap) e.g[e.second(j) + b] = lbar * bf.value;
    }
    e.g[b] = nbar;
  }
  if (want_grad) backward(net, e, grad_out);
  return weight * total;
}

constexpr std::size_t kBlock = 256;

// Loops accumulate_term over blocks of a full sample set.
double accumulate_set(const Relu3Network& net, Term term, const SampleSet& s, double potential,
                      Engine& e, std::span<double> grad_out) {
  const auto d = static_cast<std::size_t>(s.dimension);
  const double weight = 1.0 / static_cast<double>(s.size());
  const bool with_values = term != Term::kGradOnly;
  double total = 0.0;
  for (std::size_t first = 0; first < s.size(); first += kBlock) {
    const std::size_t count = std::min(kBlock, s.size() - first);
    total += accumulate_term(
        net, term, std::span<const double>(s.points).subspan(first * d, count * d),
        with_values ? std::span<const double>(s.values).subspan(first, count)
                    : std::span<const double>{},
        weight, potential, e, grad_out);
  }
  return total;
}

double full_loss(const Relu3Network& net, const LossData& data, double potential, Engine& e,
                 std::span<double> grad_out) {
  switch (data.objective()) {
    case Objective::kDrm:
      return accumulate_set(net, Term::kDrm, data.samples(), potential, e, grad_out);
    case Objective::kPinn:
      return accumulate_set(net, Term::kPinn, data.samples(), potential, e, grad_out);
    case Objective::kMdrm:
      return accumulate_set(net, Term::kGradOnly, data.split().gradient_samples, potential, e,
                            grad_out) +
             accumulate_set(net, Term::kMassSource, data.split().data_samples, potential, e,
                            grad_out);
  }
  return 0.0;
}

void check_data(const Relu3Network& net, const LossData& data) {
  if (data.objective() == Objective::kMdrm) {
    data.split().validate();
    if (data.split().data_samples.dimension != net.dimension()) {
      throw DimensionMismatch("training data dimension does not match network input");
    }
    return;
  }
  if (data.samples().size() == 0) throw DomainError("empty sample set");
  if (data.samples().dimension != net.dimension()) {
    throw DimensionMismatch("training data dimension does not match network input");
  }
}

}  // namespace

void Relu3Network::evaluate_batch(std::span<const double> points, Derivatives need,
                                  BatchJet& out) const {
  const auto d = static_cast<std::size_t>(dimension());
  if (points.size() % d != 0) throw DimensionMismatch("point buffer not a multiple of dimension");
  const std::size_t n = points.size() / d;
  out.resize(n, d, need);
  thread_local Engine e;
  BoundaryFactor bf;
  std::vector<double> grad_n(d);
  SampleJet jet{};
  for (std::size_t first = 0; first < n; first += kBlock) {
    const std::size_t count = std::min(kBlock, n - first);
    forward(*this, points.subspan(first * d, count * d), count, need, e);
    for (std::size_t b = 0; b < count; ++b) {
      const std::size_t i = first + b;
      boundary_factor(boundary_, points.subspan(i * d, d), bf);
      double* gu = need == Derivatives::kValue ? grad_n.data() : out.grad.data() + i * d;
      emitted_jet(e, b, bf, grad_n.data(), gu, jet);
      out.value[i] = jet.u;
      if (need == Derivatives::kLaplacian) out.laplacian[i] = jet.lap_u;
    }
  }
}

double Relu3Network::value(std::span<const double> x) const {
  BatchJet jet;
  evaluate_batch(x, Derivatives::kValue, jet);
  return jet.value[0];
}

void Relu3Network::gradient(std::span<const double> x, std::span<double> out) const {
  BatchJet jet;
  evaluate_batch(x, Derivatives::kGradient, jet);
  std::copy(jet.grad.begin(), jet.grad.end(), out.begin());
}

double Relu3Network::laplacian(std::span<const double> x) const {
  BatchJet jet;
  evaluate_batch(x, Derivatives::kLaplacian, jet);
  return jet.laplacian[0];
}

Relu3Network he_init(std::vector<int> widths, std::uint64_t seed, BoundaryMode boundary) {
  Relu3Network net(std::move(widths), boundary);
  const auto& w = net.widths();
  auto params = net.parameters();
  for (int l = 0; l < net.depth(); ++l) {
    const auto li = static_cast<std::size_t>(l);
    const CounterRng rng(seed, 100 + li);
    const double sd = std::sqrt(2.0 / static_cast<double>(w[li]));
    const std::size_t count = static_cast<std::size_t>(w[li]) * static_cast<std::size_t>(w[li + 1]);
    double* weights = params.data() + net.weight_offset(l);
    for (std::size_t i = 0; i < count; ++i) weights[i] = sd * rng.normal(i);
  }
  return net;
}

LossData LossData::of(Objective objective, const SampleSet& samples) {
  if (objective == Objective::kMdrm) {
    throw DomainError("MDRM loss data needs an MdrmSplit");
  }
  return {objective, &samples, nullptr};
}

const SampleSet& LossData::samples() const {
  if (samples_ == nullptr) throw DomainError("loss data holds an MDRM split, not a sample set");
  return *samples_;
}

const MdrmSplit& LossData::split() const {
  if (split_ == nullptr) throw DomainError("loss data holds a sample set, not an MDRM split");
  return *split_;
}

LossGradient loss_param_grad(const Relu3Network& net, const LossData& data, double potential) {
  check_data(net, data);
  LossGradient out;
  out.gradient.assign(net.parameters().size(), 0.0);
  Engine e;
  out.loss = full_loss(net, data, potential, e, out.gradient);
  for (double g : out.gradient) {
    if (!std::isfinite(g)) throw NumericError("non-finite parameter gradient", -1);
  }
  return out;
}

namespace {

// Epoch-wise shuffled index stream; permutation for epoch t is a pure
// function of (seed, stream, t).
class MinibatchStream {
 public:
  MinibatchStream(std::size_t n, std::uint64_t seed, std::uint64_t stream)
      : n_(n), seed_(seed), stream_(stream), order_(n) {
    reshuffle();
  }

  void next(std::size_t batch, std::vector<std::size_t>& out) {
    out.clear();
    while (out.size() < batch) {
      if (pos_ == n_) {
        ++epoch_;
        reshuffle();
      }
      out.push_back(order_[pos_++]);
    }
  }

 private:
  void reshuffle() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const CounterRng rng(hash_seed({seed_, stream_, epoch_}));
    for (std::size_t i = n_; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform(i) * static_cast<double>(i));
      std::swap(order_[i - 1], order_[std::min(j, i - 1)]);
    }
    pos_ = 0;
  }

  std::size_t n_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t epoch_ = 0;
  std::size_t pos_ = 0;
  std::vector<std::size_t> order_;
};

void gather(const SampleSet& s, const std::vector<std::size_t>& idx, std::vector<double>& pts,
            std::vector<double>& vals) {
  const auto d = static_cast<std::size_t>(s.dimension);
  pts.resize(idx.size() * d);
  vals.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy_n(s.points.begin() + static_cast<std::ptrdiff_t>(idx[i] * d), d,
                pts.begin() + static_cast<std::ptrdiff_t>(i * d));
    vals[i] = s.values[idx[i]];
  }
}

}  // namespace

TrainResult train(Relu3Network net, const LossData& data, double potential,
                  const TrainConfig& cfg) {
  check_data(net, data);
  if (cfg.iterations < 1) throw DomainError("iterations must be >= 1");
  if (cfg.step_size < 0.0) throw DomainError("step size must be >= 0");
  if (cfg.eval_every < 1) throw DomainError("eval_every must be >= 1");

  const bool mdrm = data.objective() == Objective::kMdrm;
  const SampleSet& primary = mdrm ? data.split().data_samples : data.samples();
  const std::size_t n = primary.size();
  const std::size_t batch =
      cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size) : std::min<std::size_t>(n, 128);
  if (batch < 1 || batch > n) throw DomainError("batch size must be in [1, n]");

  MinibatchStream data_stream(n, cfg.seed, 1);
  std::optional<MinibatchStream> grad_stream;
  if (mdrm) grad_stream.emplace(data.split().gradient_samples.size(), cfg.seed, 2);

  const Term batch_term = data.objective() == Objective::kPinn ? Term::kPinn
                          : mdrm                               ? Term::kMassSource
                                                               : Term::kDrm;
  Engine e;
  std::vector<double> grad(net.parameters().size());
  std::vector<double> m1(grad.size(), 0.0);
  std::vector<double> m2(grad.size(), 0.0);
  std::vector<std::size_t> idx;
  std::vector<double> pts;
  std::vector<double> vals;
  const double beta1 = 0.9;
  const double beta2 = 0.999;
  const double eps = 1e-8;

  TrainResult result{net, {}, 0};
  const double initial = full_loss(net, data, potential, e, {});
  double best = initial;
  result.trace.push_back({0, initial, best});
  const double limit = 1e6 * std::max(std::abs(initial), 1.0);

  auto record = [&](int step) {
    const double loss = full_loss(net, data, potential, e, {});
    if (!std::isfinite(loss) || std::abs(loss) > limit) {
      result.trace.push_back({step, loss, best});
      throw DivergenceError("training diverged at step " + std::to_string(step), result.trace);
    }
    if (loss < best) {
      best = loss;
      result.network = net;
      result.best_step = step;
    }
    result.trace.push_back({step, loss, best});
  };

  for (int step = 1; step <= cfg.iterations; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    data_stream.next(batch, idx);
    gather(primary, idx, pts, vals);
    const double w = 1.0 / static_cast<double>(batch);
    accumulate_term(net, batch_term, pts, vals, w, potential, e, grad);
    if (mdrm) {
      const SampleSet& gs = data.split().gradient_samples;
      const std::size_t gb = std::min(batch, gs.size());
      grad_stream->next(gb, idx);
      gather(gs, idx, pts, vals);
      accumulate_term(net, Term::kGradOnly, pts, {}, 1.0 / static_cast<double>(gb), potential, e,
                      grad);
    }

    auto params = net.parameters();
    if (cfg.optimizer == Optimizer::kPlainSgd) {
      for (std::size_t i = 0; i < grad.size(); ++i) params[i] -= cfg.step_size * grad[i];
    } else {
      const double c1 = 1.0 - std::pow(beta1, step);
      const double c2 = 1.0 - std::pow(beta2, step);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
        params[i] -= cfg.step_size * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
      }
    }
    if (step % cfg.eval_every == 0 || step == cfg.iterations) record(step);
  }
  return result;
}

void write_checkpoint(std::ostream& os, const Relu3Network& net) {
  os << "pdelearn-relu3 1\n";
  os << "bc_mode " << boundary_mode_name(net.boundary()) << '\n';
  os << "widths";
  for (int w : net.widths()) os << ' ' << w;
  os << '\n';
  os << "params " << net.parameters().size() << '\n';
  const auto old_precision = os.precision(17);
  for (double p : net.parameters()) os << p << '\n';
  os.precision(old_precision);
}

Relu3Network read_checkpoint(std::istream& is) {
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "pdelearn-relu3" || version != 1) {
    throw DomainError("not a pdelearn-relu3 v1 checkpoint");
  }
  std::string key;
  std::string mode;
  if (!(is >> key >> mode) || key != "bc_mode") throw DomainError("checkpoint: missing bc_mode");
  std::string line;
  std::getline(is, line);
  if (!std::getline(is, line) || line.rfind("widths", 0) != 0) {
    throw DomainError("checkpoint: missing widths");
  }
  std::istringstream ws(line.substr(6));
  std::vector<int> widths;
  for (int w; ws >> w;) widths.push_back(w);
  Relu3Network net(widths, parse_boundary_mode(mode));
  std::size_t count = 0;
  if (!(is >> key >> count) || key != "params" || count != net.parameters().size()) {
    throw DomainError("checkpoint: parameter count mismatch");
  }
  for (double& p : net.parameters()) {
    if (!(is >> p)) throw DomainError("checkpoint: truncated parameter list");
  }
  return net;
}

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
  os << "step,loss,best_loss\n";
  const auto old_precision = os.precision(17);
  for (const auto& t : trace) os << t.step << ',' << t.loss << ',' << t.best_loss << '\n';
  os.precision(old_precision);
}

}  // namespace pdelearn
