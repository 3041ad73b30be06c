// Acceptance gates: one PASS/FAIL line per criterion with the measured
// value, the pinned tolerance and the wall time. Exit status is nonzero when
// any gate fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdelearn/freq_lattice.hpp"
#include "pdelearn/metrics.hpp"
#include "pdelearn/minimax_bench.hpp"
#include "pdelearn/objectives.hpp"
#include "pdelearn/relu3_net.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/scaling_lab.hpp"
#include "pdelearn/spectral.hpp"
#include "pdelearn/spectral_estimators.hpp"

using namespace pdelearn;
using std::numbers::pi;

namespace {

struct Gate {
  int id;
  std::string what;
  bool pass;
  std::string detail;
  double seconds;
  double budget;
};

std::vector<Gate> gates;

template <class F>
void gate(int id, const std::string& what, double budget, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget) {
    pass = false;
    detail += " [over time budget]";
  }
  gates.push_back({id, what, pass, detail, secs, budget});
  std::printf("%s criterion %d: %s | %s | %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str(), secs, budget);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

SpectralFunction random_spectral(int d, int cutoff, double decay, std::uint64_t seed) {
  const FrequencySet set(d, cutoff);
  const CounterRng rng(seed, 5);
  std::vector<double> c(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    c[i] = rng.uniform(i, -1.0, 1.0) * std::pow(std::sqrt(double(set.squared_norm(i))), -decay);
  }
  return SpectralFunction(set, c);
}

// Tensor midpoint rule with N nodes per axis. Exact for integrals of products
// of two sine-basis functions (and their derivatives) up to frequency N.
struct Moments {
  double l2 = 0.0, grad = 0.0, lap = 0.0;
};

Moments midpoint_moments(const SpectralFunction& e, int N) {
  const int d = e.dimension();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d), g(d);
  Moments m;
  const double w = std::pow(1.0 / N, d);
  while (true) {
    for (int j = 0; j < d; ++j) x[j] = (idx[j] + 0.5) / N;
    const double v = e.value(x);
    e.gradient(x, g);
    const double l = e.laplacian(x);
    m.l2 += w * v * v;
    for (double gj : g) m.grad += w * gj * gj;
    m.lap += w * l * l;
    int j = d - 1;
    while (j >= 0 && ++idx[j] == N) idx[j--] = 0;
    if (j < 0) break;
  }
  return m;
}

struct Pair {
  SchrodingerProblem problem;
  SpectralFunction u;
  Moments err;
};

const std::vector<Pair>& pairs() {
  static const std::vector<Pair> all = [] {
    std::vector<Pair> out;
    const double potentials[] = {0.5, 1.0, 2.0};
    for (int k = 0; k < 100; ++k) {
      const int d = 1 + k % 3;
      SchrodingerProblem p = make_problem(random_spectral(d, 4, 3.0, hash_seed({21, std::uint64_t(k)})),
                                          potentials[(k / 3) % 3]);
      SpectralFunction u = random_spectral(d, 5, 3.0, hash_seed({22, std::uint64_t(k)}));
      const Moments m = midpoint_moments(u - p.truth, 12);
      out.push_back({std::move(p), std::move(u), m});
    }
    return out;
  }();
  return all;
}

double slope_of(const std::vector<double>& n, const std::vector<double>& e) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]);
    my += std::log(e[i]);
  }
  mx /= n.size();
  my /= n.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxy += (std::log(n[i]) - mx) * (std::log(e[i]) - my);
    sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
  }
  return sxy / sxx;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

const std::vector<std::size_t> kGramGrid{100, 1000, 10000, 100000};

}  // namespace

int main() {
  gate(1, "DRM excess-energy identity on 100 pairs", 1.0, [](std::string& detail) {
    double worst = 0.0;
    for (const Pair& p : pairs()) {
      const double V = p.problem.potential;
      const double de = excess_energy(p.u, p.problem, Objective::kDrm);
      worst = std::max(worst, std::abs(de - (0.5 * p.err.grad + 0.5 * V * p.err.l2)));
    }
    detail = fmt("max residual %.3e, tol 1e-10", worst);
    return worst <= 1e-10;
  });

  gate(2, "PINN excess-energy identity on 100 pairs", 1.0, [](std::string& detail) {
    double worst = 0.0;
    for (const Pair& p : pairs()) {
      const double V = p.problem.potential;
      const double de = excess_energy(p.u, p.problem, Objective::kPinn);
      worst = std::max(worst, std::abs(de - (p.err.lap + V * V * p.err.l2 + 2 * V * p.err.grad)));
    }
    detail = fmt("max residual %.3e, tol 1e-10", worst);
    return worst <= 1e-10;
  });

  gate(3, "strong-convexity sandwiches (DRM in H1, PINN in H2, C_min = V)", 1.0, [](std::string& detail) {
    double worst = 0.0;  // most negative slack
    for (const Pair& p : pairs()) {
      const double V = p.problem.potential;
      const double drm = excess_energy(p.u, p.problem, Objective::kDrm);
      const double pinn = excess_energy(p.u, p.problem, Objective::kPinn);
      const double h1 = p.err.l2 + p.err.grad;
      const double h2 = p.err.l2 + p.err.lap;
      const double slacks[] = {
          h1 - 2.0 / std::max(1.0, V) * drm,
          2.0 / std::min(1.0, V) * drm - h1,
          pinn - std::min(1.0, V) * h2,
          2.0 * (1 + V + V * V) * h2 - pinn,
          h2 - pinn / (2.0 * (1 + V + V * V)),
          2.0 / std::max(1.0, V) * pinn - h2,
      };
      for (double s : slacks) worst = std::min(worst, s);
    }
    detail = fmt("min slack %.3e, tol -1e-10", worst);
    return worst >= -1e-10;
  });

  gate(4, "truncation bound on 20 functions, beta in {0,1}, xi in {1,2,4,8}", 1.0, [](std::string& detail) {
    const double alphas[] = {2.0, 3.0, 4.0};
    double worst_ratio = 0.0;
    double worst_mismatch = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int d = 1 + k % 2;
      const double alpha = alphas[k % 3];
      const SpectralFunction f = random_spectral(d, 12, alpha + 0.5 * d + 0.25, hash_seed({23, std::uint64_t(k)}));
      for (int beta : {0, 1}) {
        for (int xi : {1, 2, 4, 8}) {
          const double lhs = bessel_norm(f - truncate(f, xi), beta);
          const double rhs = std::pow(xi, -(alpha - beta)) * bessel_norm(f, alpha);
          double tail = 0.0, full = 0.0;
          for (const auto& t : f.terms()) {
            const double w = 1.0 + pi * pi * t.index.squared_norm();
            full += t.coefficient * t.coefficient * std::pow(w, alpha);
            if (t.index.max_norm() > xi) tail += t.coefficient * t.coefficient * std::pow(w, beta);
          }
          worst_mismatch = std::max(worst_mismatch, oracle::rel_err(lhs, std::sqrt(tail)));
          worst_mismatch = std::max(worst_mismatch, oracle::rel_err(bessel_norm(f, alpha), std::sqrt(full)));
          worst_ratio = std::max(worst_ratio, lhs / rhs);
        }
      }
    }
    detail = fmt("max lhs/rhs %.3e (<= 1), norm cross-check %.1e", worst_ratio, worst_mismatch);
    return worst_ratio <= 1.0 && worst_mismatch <= 1e-12;
  });

  gate(5, "exact PINN recovery, n = 3 xi^d, d in {1,2}, xi in {2,3}", 10.0, [](std::string& detail) {
    double worst = 0.0;
    for (int d : {1, 2}) {
      for (int xi : {2, 3}) {
        const SpectralFunction truth = random_spectral(d, xi, 1.0, hash_seed({24, std::uint64_t(d), std::uint64_t(xi)}));
        const SchrodingerProblem p = make_problem(truth, 1.0);
        const std::size_t n = 3 * lattice_size(d, xi);
        const SpectralFunction est = fit_pinn(draw_samples(p, n, 7, 0.0), xi, 1.0);
        double h2 = 0.0;
        const FrequencySet set(d, xi);
        for (std::size_t i = 0; i < set.size(); ++i) {
          const double diff = est.coefficient(set[i]) - truth.coefficient(set[i]);
          const double lam = pi * pi * set.squared_norm(i);
          h2 += diff * diff * (1 + lam * lam);
        }
        worst = std::max(worst, std::sqrt(h2));
      }
    }
    detail = fmt("max H2 error %.3e, tol 1e-8", worst);
    return worst <= 1e-8;
  });

  gate(6, "network input/parameter derivatives vs central differences, 100 configs", 30.0, [](std::string& detail) {
    double worst_in = 0.0, worst_param = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); };
    for (int k = 0; k < 100; ++k) {
      const int d = 1 + k % 3;
      const BoundaryMode bc = k % 2 ? BoundaryMode::kNone : BoundaryMode::kHardMultiplier;
      Relu3Network net = he_init({d, 6, 5, 1}, hash_seed({25, std::uint64_t(k)}), bc);
      const CounterRng rng(hash_seed({26, std::uint64_t(k)}));
      for (std::size_t i = 0; i < net.parameters().size(); ++i) net.parameters()[i] += 0.1 * rng.normal(i);
      const double V = 0.5 + 0.5 * (k % 4);

      const std::vector<double> x = draw_points(d, 1, hash_seed({27, std::uint64_t(k)}));
      auto f = [&](std::span<const double> y) { return net.value(y); };
      std::vector<double> g(d);
      net.gradient(x, g);
      double lap_fd = 0.0;
      for (int j = 0; j < d; ++j) {
        worst_in = std::max(worst_in, rel(g[j], oracle::central_diff(f, x, j, 1e-5)));
        auto gj = [&](std::span<const double> y) {
          std::vector<double> gy(d);
          net.gradient(y, gy);
          return gy[j];
        };
        lap_fd += oracle::central_diff(gj, x, j, 1e-5);
      }
      worst_in = std::max(worst_in, rel(net.laplacian(x), lap_fd));

      const SpectralFunction src = random_spectral(d, 2, 0.0, hash_seed({28, std::uint64_t(k)}));
      const SampleSet s = draw_samples(src, 16, hash_seed({29, std::uint64_t(k)}), 0.0);
      const MdrmSplit split{draw_samples(src, 24, hash_seed({30, std::uint64_t(k)}), 0.0), s};
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
        worst_param = std::max(worst_param, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-8));
      }
    }
    detail = fmt("max rel err input %.3e, parameters %.3e, tol 1e-4", worst_in, worst_param);
    return worst_in <= 1e-4 && worst_param <= 1e-4;
  });

  gate(7, "Gram deviation slope over n in 1e2..1e5 (d=2, xi=2, 20 seeds)", 120.0, [](std::string& detail) {
    const FrequencySet basis(2, 2);
    const std::size_t K = basis.size();
    const double V = 1.0;
    std::vector<double> ns, meds;
    double worst_cross = 0.0;
    for (std::size_t n : kGramGrid) {
      std::vector<double> devs;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<double> pts = draw_points(2, n, hash_seed({31, seed}));
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
        std::vector<double> phi(K), gx(K), gy(K);
        for (std::size_t j = 0; j < n; ++j) {
          const double x = pts[2 * j], y = pts[2 * j + 1];
          for (std::size_t i = 0; i < K; ++i) {
            const double a = pi * basis[i][0], b = pi * basis[i][1];
            phi[i] = 2.0 * std::sin(a * x) * std::sin(b * y);
            gx[i] = 2.0 * a * std::cos(a * x) * std::sin(b * y);
            gy[i] = 2.0 * b * std::sin(a * x) * std::cos(b * y);
          }
          for (std::size_t r = 0; r < K; ++r) {
            for (std::size_t c = 0; c < K; ++c) A(r, c) += gx[r] * gx[c] + gy[r] * gy[c] + V * phi[r] * phi[c];
          }
        }
        A /= double(n);
        Eigen::MatrixXd Dm(K, K);
        for (std::size_t r = 0; r < K; ++r) {
          for (std::size_t c = 0; c < K; ++c) {
            const double dr = pi * pi * basis.squared_norm(r) + V, dc = pi * pi * basis.squared_norm(c) + V;
            Dm(r, c) = (A(r, c) - (r == c ? dr : 0.0)) / std::sqrt(dr * dc);
          }
        }
        const double dev = Dm.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().maxCoeff();
        SampleSet s;
        s.dimension = 2;
        s.points = pts;
        s.values.assign(n, 0.0);
        worst_cross = std::max(worst_cross, oracle::rel_err(gram_deviation(s, 2, V, 1e-10), dev));
        devs.push_back(dev);
      }
      ns.push_back(double(n));
      meds.push_back(median(devs));
    }
    const double slope = slope_of(ns, meds);
    detail = fmt("slope %.4f, target -0.5 +- 0.15, library vs eigensolver %.1e", slope, worst_cross);
    return std::abs(slope + 0.5) <= 0.15 && worst_cross <= 1e-6;
  });

  gate(8, "DRM-vs-exact-inversion H1 distance decreases along n in 1e2..1e5", 120.0, [](std::string& detail) {
    const int xi = 2;
    const double V = 1.0;
    const SchrodingerProblem p = make_problem(make_powerlaw_truth(2, 4.0, 8), V);
    const FrequencySet set(2, xi);
    std::vector<double> meds;
    for (std::size_t n : kGramGrid) {
      std::vector<double> dist;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SpectralFunction drm = fit_drm(draw_samples(p, n, hash_seed({32, seed}), 0.0), xi, V);
        double h1 = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
          const double lam = pi * pi * set.squared_norm(i);
          // exact inversion of the exact source coefficient is the truth coefficient
          const double oracle_coef = p.source.coefficient(set[i]) / (lam + V);
          const double diff = drm.coefficient(set[i]) - oracle_coef;
          h1 += diff * diff * (1 + lam);
        }
        dist.push_back(std::sqrt(h1));
      }
      meds.push_back(median(dist));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < meds.size(); ++i) monotone = monotone && meds[i] < meds[i - 1];
    detail = fmt("medians %.3e %.3e %.3e %.3e", meds[0], meds[1], meds[2], meds[3]);
    return monotone;
  });

  gate(9, "separation exponents 2s-2 (H1) and 2s-4 (H2), s in {3,4}, d in {1,2}", 60.0, [](std::string& detail) {
    const int grid[] = {4, 8, 16, 32};
    double worst = 0.0;
    for (double s : {3.0, 4.0}) {
      for (int d : {1, 2}) {
        const auto rows = separation_scaling(grid, s, d, 1.0, 1.0, BumpNormalization::kPerCell);
        for (SeparationNorm norm : {SeparationNorm::kH1Semi, SeparationNorm::kH2Semi}) {
          std::vector<double> ms, seps;
          for (const auto& r : rows) {
            if (r.norm != norm) continue;
            ms.push_back(r.m);
            seps.push_back(r.separation);
          }
          const double expected = norm == SeparationNorm::kH1Semi ? 2 * s - 2 : 2 * s - 4;
          worst = std::max(worst, std::abs(-slope_of(ms, seps) - expected) / expected);
        }
      }
    }
    // Closed-form cross-check at one grid point: full disagreement in d = 1
    // gives omega^2 m^(2-2s) int xi'^2.
    auto xi = [](double x) { return x <= 0 || x >= 1 ? 0.0 : std::exp(-1.0 / (x * (1 - x))); };
    auto dxi = [&](double x) {
      if (x <= 0 || x >= 1) return 0.0;
      const double q = x * (1 - x);
      return xi(x) * (1 - 2 * x) / (q * q);
    };
    const double i1 = oracle::simpson([&](double x) { return dxi(x) * dxi(x); }, 0.0, 1.0, 20000);
    const double sep = separation(uniform_hypothesis(8, 3.0, 1, 1.0, true),
                                  uniform_hypothesis(8, 3.0, 1, 1.0, false), SeparationNorm::kH1Semi);
    const double cross = oracle::rel_err(sep, std::pow(8.0, -4.0) * i1);
    detail = fmt("max relative exponent error %.4f, tol 0.05, closed-form cross-check %.1e", worst, cross);
    return worst <= 0.05 && cross <= 1e-6;
  });

  gate(10, "Fourier DRM/MDRM squared-H1 slopes, d=2, s=4, n in 80..20480", 600.0, [](std::string& detail) {
    ExperimentConfig cfg;
    const ScalingResult drm = run_experiment(cfg, 0);
    cfg.objective = Objective::kMdrm;
    const ScalingResult mdrm = run_experiment(cfg, 0);
    auto refit = [](const ScalingResult& r) {
      std::vector<double> n, e2;
      for (const auto& row : r.rows) {
        n.push_back(double(row.n));
        e2.push_back(row.error * row.error);
      }
      return slope_of(n, e2);
    };
    const double a = drm.fit.slope, b = mdrm.fit.slope;
    const double refit_gap = std::max(std::abs(refit(drm) - a), std::abs(refit(mdrm) - b));
    detail = fmt("DRM %.3f (R2 %.3f) in [-0.9,-0.35]; MDRM %.3f (R2 %.3f) in [-1.1,-0.5]", a, drm.fit.r2, b,
                 mdrm.fit.r2) +
             fmt("; gap %.3f >= 0.05; refit %.1e", a - b, refit_gap);
    return a >= -0.9 && a <= -0.35 && b >= -1.1 && b <= -0.5 && b <= a - 0.05 && drm.fit.r2 >= 0.9 &&
           mdrm.fit.r2 >= 0.9 && refit_gap <= 1e-9;
  });

  std::printf("SKIP criterion 11: relu3 adaptivity on the pairwise polynomial in d=10 (hours; run `pdelearn scale --config configs/fig3b.json`)\n");
  std::printf("SKIP criterion 12: dimension law over d=5..10 (hours; run `pdelearn dims --config configs/fig2_dims.json`)\n");

  int failed = 0;
  for (const Gate& g : gates) failed += !g.pass;
  std::printf("%d of %zu gates passed\n", int(gates.size()) - failed, gates.size());
  return failed == 0 ? 0 : 1;
}
