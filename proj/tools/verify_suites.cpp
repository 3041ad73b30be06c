#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "pdelearn/errors.hpp"
#include "pdelearn/freq_lattice.hpp"
#include "pdelearn/minimax_bench.hpp"
#include "pdelearn/objectives.hpp"
#include "pdelearn/relu3_net.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn::cli {

namespace {

struct Tracker {
  std::string suite;
  std::string name;
  double tolerance;
  double worst = 0.0;
  bool ok = true;

  // Residual must not exceed the tolerance.
  void residual(double r) {
    worst = std::max(worst, r);
    if (!(r <= tolerance)) ok = false;
  }
  // Slack must stay above -tolerance; reported as the deficit below zero.
  void slack(double s) {
    const double deficit = std::max(0.0, -s);
    worst = std::max(worst, deficit);
    if (!(s >= -tolerance)) ok = false;
  }
  CheckResult result() const { return {suite, name, worst, tolerance, ok}; }
};

// Coefficients uniform in [-1, 1] scaled by ||z||^(-decay) on ||z||_inf <= cutoff.
SpectralFunction random_spectral(int d, int cutoff, double decay, std::uint64_t seed) {
  const FrequencySet set(d, cutoff);
  const CounterRng rng(seed, 11);
  std::vector<double> c(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    c[i] = rng.uniform(i, -1.0, 1.0) * std::pow(static_cast<double>(set.squared_norm(i)), -0.5 * decay);
  }
  return SpectralFunction(set, c);
}

double weighted_sum(const SpectralFunction& e, int lambda_power) {
  double acc = 0.0;
  for (const auto& t : e.terms()) {
    acc += t.coefficient * t.coefficient * std::pow(laplace_eigenvalue(t.index), lambda_power);
  }
  return acc;
}

std::vector<CheckResult> identities() {
  Tracker drm{"identities", "drm_excess_energy", 1e-10};
  Tracker pinn{"identities", "pinn_excess_energy", 1e-10};
  Tracker drm_sandwich{"identities", "drm_h1_sandwich", 1e-10};
  Tracker pinn_sandwich{"identities", "pinn_h2_sandwich", 1e-10};
  const double potentials[] = {0.5, 1.0, 2.0};
  for (int k = 0; k < 100; ++k) {
    const int d = 1 + k % 3;
    const double V = potentials[k % 3];
    const SchrodingerProblem p = make_problem(random_spectral(d, 4, 3.0, hash_seed({1, std::uint64_t(k)})), V);
    const SpectralFunction u = random_spectral(d, 5, 3.0, hash_seed({2, std::uint64_t(k)}));
    const SpectralFunction e = u - p.truth;
    const double l2 = weighted_sum(e, 0);
    const double grad = weighted_sum(e, 1);
    const double lap = weighted_sum(e, 2);

    const double de_drm = excess_energy(u, p, Objective::kDrm);
    drm.residual(std::abs(de_drm - (0.5 * grad + 0.5 * V * l2)));
    const double de_pinn = excess_energy(u, p, Objective::kPinn);
    pinn.residual(std::abs(de_pinn - (lap + V * V * l2 + 2.0 * V * grad)));

    const double h1 = l2 + grad;
    drm_sandwich.slack(h1 - 2.0 / std::max(1.0, V) * de_drm);
    drm_sandwich.slack(2.0 / std::min(1.0, V) * de_drm - h1);
    const double h2 = l2 + lap;
    pinn_sandwich.slack(de_pinn - std::min(1.0, V) * h2);
    pinn_sandwich.slack(2.0 * (1.0 + V + V * V) * h2 - de_pinn);
  }
  return {drm.result(), pinn.result(), drm_sandwich.result(), pinn_sandwich.result()};
}

double relative(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

std::vector<CheckResult> gradients() {
  Tracker value_grad{"gradients", "network_input_gradient", 1e-4};
  Tracker value_lap{"gradients", "network_input_laplacian", 1e-4};
  Tracker drm{"gradients", "drm_parameter_gradient", 1e-4};
  Tracker pinn{"gradients", "pinn_parameter_gradient", 1e-4};
  Tracker mdrm{"gradients", "mdrm_parameter_gradient", 1e-4};
  for (int k = 0; k < 100; ++k) {
    const int d = 1 + k % 3;
    const BoundaryMode bc = k % 2 == 0 ? BoundaryMode::kHardMultiplier : BoundaryMode::kNone;
    Relu3Network net = he_init({d, 6, 5, 1}, hash_seed({3, std::uint64_t(k)}), bc);
    const CounterRng rng(hash_seed({4, std::uint64_t(k)}));
    for (std::size_t i = 0; i < net.parameters().size(); ++i) {
      net.parameters()[i] += 0.1 * rng.normal(i);
    }
    const double V = 0.5 + (k % 4) * 0.5;

    const std::vector<double> x = draw_points(d, 1, hash_seed({5, std::uint64_t(k)}));
    std::vector<double> g(static_cast<std::size_t>(d));
    net.gradient(x, g);
    const double lap = net.laplacian(x);
    const double h = 1e-5;
    double lap_fd = 0.0;
    std::vector<double> gp(g.size());
    std::vector<double> gm(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      std::vector<double> xp = x;
      std::vector<double> xm = x;
      xp[j] += h;
      xm[j] -= h;
      value_grad.residual(relative(g[j], (net.value(xp) - net.value(xm)) / (2.0 * h)));
      net.gradient(xp, gp);
      net.gradient(xm, gm);
      lap_fd += (gp[j] - gm[j]) / (2.0 * h);
    }
    value_lap.residual(relative(lap, lap_fd));

    const std::uint64_t seed = hash_seed({6, std::uint64_t(k)});
    const SpectralFunction f = random_spectral(d, 2, 0.0, seed);
    const SampleSet samples = draw_samples(f, 16, seed, 0.0);
    const MdrmSplit split{draw_samples(f, 24, seed + 1, 0.0), samples};
    struct Case {
      Tracker* tracker;
      LossData data;
    };
    const Case cases[] = {{&drm, LossData::drm(samples)},
                          {&pinn, LossData::pinn(samples)},
                          {&mdrm, LossData::mdrm(split)}};
    for (const auto& c : cases) {
      const LossGradient lg = loss_param_grad(net, c.data, V);
      auto loss = [&](const Relu3Network& n) {
        switch (c.data.objective()) {
          case Objective::kDrm:
            return drm_empirical(n, samples, V);
          case Objective::kPinn:
            return pinn_empirical(n, samples, V);
          case Objective::kMdrm:
            return mdrm_empirical(n, split, V);
        }
        return 0.0;
      };
      c.tracker->residual(relative(lg.loss, loss(net)));
      double diff = 0.0;
      double norm = 0.0;
      const double hp = 1e-6;
      for (std::size_t i = 0; i < lg.gradient.size(); ++i) {
        Relu3Network plus = net;
        Relu3Network minus = net;
        plus.parameters()[i] += hp;
        minus.parameters()[i] -= hp;
        const double fd = (loss(plus) - loss(minus)) / (2.0 * hp);
        diff += (fd - lg.gradient[i]) * (fd - lg.gradient[i]);
        norm += lg.gradient[i] * lg.gradient[i];
      }
      c.tracker->residual(std::sqrt(diff) / std::max(std::sqrt(norm), 1e-8));
    }
  }
  return {value_grad.result(), value_lap.result(), drm.result(), pinn.result(), mdrm.result()};
}

std::vector<CheckResult> truncation() {
  Tracker t{"truncation", "truncation_bound", 1e-12};
  const double alphas[] = {2.0, 3.0, 4.0};
  for (int k = 0; k < 20; ++k) {
    const int d = 1 + k % 2;
    const double alpha = alphas[k % 3];
    const SpectralFunction f = random_spectral(d, 12, alpha + 0.5 * d + 0.25, hash_seed({7, std::uint64_t(k)}));
    for (int beta : {0, 1}) {
      for (int xi : {1, 2, 4, 8}) {
        const double lhs = bessel_norm(f - truncate(f, xi), beta);
        const double rhs = std::pow(xi, -(alpha - beta)) * bessel_norm(f, alpha);
        t.slack((rhs - lhs) / std::max(rhs, 1e-300));
      }
    }
  }
  return {t.result()};
}

std::vector<CheckResult> orthonormality() {
  Tracker mass{"orthonormality", "basis_l2_gram", 1e-10};
  Tracker stiffness{"orthonormality", "basis_gradient_gram", 1e-10};
  const QuadratureRule rule = gauss_legendre(48);
  const FrequencySet basis(2, 4);
  const std::size_t K = basis.size();
  std::vector<double> m(K * K, 0.0);
  std::vector<double> a(K * K, 0.0);
  std::vector<double> vals(K);
  std::vector<std::vector<double>> grads(K);
  for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x[2] = {rule.nodes[p], rule.nodes[q]};
      const double w = rule.weights[p] * rule.weights[q];
      for (std::size_t i = 0; i < K; ++i) {
        vals[i] = basis_eval(basis[i], x);
        grads[i] = basis_grad(basis[i], x);
      }
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
          m[i * K + j] += w * vals[i] * vals[j];
          a[i * K + j] += w * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
        }
      }
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    const double lam = laplace_eigenvalue(basis[i]);
    for (std::size_t j = 0; j < K; ++j) {
      mass.residual(std::abs(m[i * K + j] - (i == j ? 1.0 : 0.0)));
      stiffness.residual(std::abs(a[i * K + j] - (i == j ? lam : 0.0)) / (1.0 + lam));
    }
  }
  return {mass.result(), stiffness.result()};
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite == "identities") return identities();
  if (suite == "gradients") return gradients();
  if (suite == "truncation") return truncation();
  if (suite == "orthonormality") return orthonormality();
  if (suite == "all") {
    std::vector<CheckResult> out;
    for (const char* s : {"identities", "gradients", "truncation", "orthonormality"}) {
      const auto part = run_suite(s);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw ConfigError("unknown suite '" + suite +
                    "' (expected identities|gradients|truncation|orthonormality|all)");
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  const auto flags = os.flags();
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(16) << r.suite << std::setw(28)
       << r.name << " max_residual=" << std::scientific << std::setprecision(3) << r.max_residual
       << " tol=" << r.tolerance << '\n';
    os.flags(flags);
  }
}

}  // namespace pdelearn::cli
