#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pdelearn/errors.hpp"
#include "pdelearn/metrics.hpp"
#include "pdelearn/spectral_estimators.hpp"

using namespace pdelearn;
using std::numbers::pi;

namespace {

SchrodingerProblem in_span_problem(int d, double V) {
  std::map<FrequencyIndex, double> c;
  const FrequencySet set(d, 2);
  for (std::size_t i = 0; i < set.size(); ++i) c[set[i]] = 1.0 / (1.0 + i);
  return make_problem(SpectralFunction(d, c), V);
}

}  // namespace

TEST(SpectralEstimators, GramEntriesByHand) {
  // One point, d = 1, cutoff 2.
  SampleSet s;
  s.dimension = 1;
  s.points = {0.3};
  s.values = {1.5};
  const double V = 2.0;
  const GramSystem g = assemble_drm_gram(s, 2, V);
  auto phi = [](int k, double x) { return std::sqrt(2.0) * std::sin(pi * k * x); };
  auto dphi = [](int k, double x) { return std::sqrt(2.0) * pi * k * std::cos(pi * k * x); };
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(g.matrix(i, j), dphi(i + 1, 0.3) * dphi(j + 1, 0.3) + V * phi(i + 1, 0.3) * phi(j + 1, 0.3),
                  1e-12);
    }
    EXPECT_NEAR(g.rhs(i), 1.5 * phi(i + 1, 0.3), 1e-14);
  }
}

TEST(SpectralEstimators, ExpectedGramAndExactRhs) {
  const FrequencySet basis(2, 2);
  const Eigen::MatrixXd e = expected_gram(basis, 1.5);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_NEAR(e(i, i), pi * pi * basis.squared_norm(i) + 1.5, 1e-12);
  }
  EXPECT_EQ(e(0, 1), 0.0);
  const SchrodingerProblem p = in_span_problem(2, 1.0);
  const Eigen::VectorXd r = exact_rhs(basis, p.source);
  for (std::size_t i = 0; i < basis.size(); ++i) EXPECT_EQ(r(i), p.source.coefficient(basis[i]));
}

TEST(SpectralEstimators, DrmGramConvergesToExpectation) {
  const SchrodingerProblem p = in_span_problem(2, 1.0);
  const double small = gram_deviation(draw_samples(p, 100, 1, 0.0), 2, 1.0);
  const double large = gram_deviation(draw_samples(p, 100000, 1, 0.0), 2, 1.0);
  EXPECT_LT(large, small);
  EXPECT_LT(large, 0.05);
}

TEST(SpectralEstimators, OracleExactRecoversTruthInSpan) {
  const SchrodingerProblem p = in_span_problem(2, 1.0);
  const SpectralFunction u = fit_oracle_exact(p.source, 2, 1.0);
  EXPECT_LT(spectral_error(u, p.truth, 2), 1e-14);
}

TEST(SpectralEstimators, PinnRecoversTruthInSpan) {
  for (int d : {1, 2}) {
    for (int xi : {2, 3}) {
      std::map<FrequencyIndex, double> c;
      const FrequencySet set(d, xi);
      for (std::size_t i = 0; i < set.size(); ++i) c[set[i]] = std::pow(-0.5, static_cast<int>(i));
      const SchrodingerProblem p = make_problem(SpectralFunction(d, c), 1.0);
      const std::size_t n = 3 * set.size();
      const PinnFit fit = fit_pinn_detailed(draw_samples(p, n, 11, 0.0), xi, 1.0);
      EXPECT_EQ(fit.rank, static_cast<Eigen::Index>(set.size()));
      EXPECT_LT(spectral_error(fit.estimate, p.truth, 2), 1e-8);
    }
  }
}

TEST(SpectralEstimators, DrmConsistentAsSamplesGrow) {
  const SchrodingerProblem p = in_span_problem(2, 1.0);
  const double e_small = spectral_error(fit_drm(draw_samples(p, 200, 3, 0.0), 2, 1.0), p.truth, 1);
  const double e_large = spectral_error(fit_drm(draw_samples(p, 50000, 3, 0.0), 2, 1.0), p.truth, 1);
  // 250x more samples, error ~ n^(-1/2): expect roughly a 16x drop.
  EXPECT_LT(e_large, e_small / 5.0);
}

TEST(SpectralEstimators, MdrmWithExactGradientMatchesSolve) {
  const SchrodingerProblem p = in_span_problem(1, 1.0);
  const MdrmSplit split{draw_samples(p, 400, 1, 0.0), draw_samples(p, 100, 2, 0.0)};
  const GramSystem g = assemble_mdrm_gram(split, 2, 1.0, true);
  // Off-diagonal entries come from the mass block only.
  double mass01 = 0.0;
  for (std::size_t j = 0; j < 100; ++j) {
    const double x = split.data_samples.point(j)[0];
    mass01 += 2.0 * std::sin(pi * x) * std::sin(2 * pi * x);
  }
  EXPECT_NEAR(g.matrix(0, 1), mass01 / 100, 1e-12);
  const SpectralFunction u = fit_mdrm(split, 2, 1.0);
  EXPECT_EQ(u.dimension(), 1);
}

TEST(SpectralEstimators, RidgeEscalatesThenThrows) {
  GramSystem g{FrequencySet(1, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2)};
  g.matrix << 1.0, 2.0, 2.0, 1.0;  // indefinite
  EXPECT_THROW(solve_gram(g, 0.0), SingularSystemError);
  g.matrix << 1.0, 0.0, 0.0, 4.0;
  g.rhs << 2.0, 4.0;
  const DrmFit fit = solve_gram(g, 0.0);
  EXPECT_NEAR(fit.estimate.coefficient(FrequencyIndex{1}), 2.0, 1e-14);
  EXPECT_NEAR(fit.estimate.coefficient(FrequencyIndex{2}), 1.0, 1e-14);
}

TEST(SpectralEstimators, TooManyUnknownsIsRejected) {
  const SpectralFunction f(3, {{FrequencyIndex{1, 1, 1}, 1.0}});
  EXPECT_THROW(fit_drm(draw_samples(f, 10, 1, 0.0), 17, 1.0), SizeError);
}

TEST(SpectralEstimators, MdrmGradientSize) {
  // d = 2, s = 4: n * ceil(n^(2/6))
  EXPECT_EQ(mdrm_gradient_size(1000, 2, 4.0), 1000u * 10u);
  EXPECT_EQ(mdrm_gradient_size(1000, 2, 4.0, 5000), 5000u);
}

TEST(SpectralEstimators, GramCsvLayout) {
  GramSystem g{FrequencySet(1, 1), Eigen::MatrixXd::Constant(1, 1, 3.0), Eigen::VectorXd::Constant(1, 0.5)};
  std::ostringstream os;
  write_gram_csv(os, g);
  EXPECT_EQ(os.str(), "row,col,value\n0,0,3\nrhs,0,0.5\n");
}
