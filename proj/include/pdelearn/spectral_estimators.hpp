#pragma once

// Truncated sine-series estimators fitted by exact linear algebra.

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>

#include "pdelearn/freq_lattice.hpp"
#include "pdelearn/objectives.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn {

// Estimators are limited to this many unknowns (xi^d).
inline constexpr std::size_t kMaxSpectralUnknowns = 4096;
inline constexpr double kDefaultRidge = 1e-10;

// Quadratic form of the empirical DRM energy over span{phi_z : z in basis}:
//   E(u) = 1/2 u^T A u - u^T rhs
struct GramSystem {
  FrequencySet basis;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

// A_ij = (1/n) sum_k [grad phi_i . grad phi_j + V phi_i phi_j](X_k)
// rhs_i = (1/n) sum_k f_k phi_i(X_k)
GramSystem assemble_drm_gram(const SampleSet& samples, int cutoff, double potential);

// Gradient block from the N-sample, mass block and rhs from the n-sample.
// With exact_gradient the gradient block is replaced by diag(pi^2 |z|^2).
GramSystem assemble_mdrm_gram(const MdrmSplit& split, int cutoff, double potential,
                              bool exact_gradient = false);

// E[A] = diag(pi^2 |z|^2 + V)
Eigen::MatrixXd expected_gram(const FrequencySet& basis, double potential);
// rhs_z = f_z, the exact sine coefficients of the source.
Eigen::VectorXd exact_rhs(const FrequencySet& basis, const SpectralFunction& source);

struct DrmFit {
  SpectralFunction estimate;
  double ridge_used;  // absolute shift added to the diagonal
};

// Minimizes 1/2 u^T A u - u^T rhs. `ridge` is relative to trace(A)/K; when
// the Cholesky factorization fails the relative ridge is escalated x10 up to
// 1e-6 before throwing SingularSystemError.
DrmFit solve_gram(const GramSystem& system, double ridge = kDefaultRidge);

SpectralFunction fit_drm(const SampleSet& samples, int cutoff, double potential,
                         double ridge = kDefaultRidge);
SpectralFunction fit_mdrm(const MdrmSplit& split, int cutoff, double potential,
                          double ridge = kDefaultRidge);

struct PinnFit {
  SpectralFunction estimate;
  Eigen::Index rank;
};

// Least squares on M u = f with M_ji = (V + pi^2 |i|^2) phi_i(X_j), via a
// complete orthogonal decomposition (minimal-norm when rank deficient).
PinnFit fit_pinn_detailed(const SampleSet& samples, int cutoff, double potential);
inline SpectralFunction fit_pinn(const SampleSet& samples, int cutoff, double potential) {
  return fit_pinn_detailed(samples, cutoff, potential).estimate;
}

// Monte-Carlo source coefficients divided by the operator symbol:
//   u_z = [(1/n) sum_j f_j phi_z(X_j)] / (pi^2 |z|^2 + V)
SpectralFunction fit_oracle(const SampleSet& samples, int cutoff, double potential);
// Same with the exact source coefficients in place of the Monte-Carlo ones.
SpectralFunction fit_oracle_exact(const SpectralFunction& source, int cutoff, double potential);

// Spectral norm of D^{-1/2} (A - E[A]) D^{-1/2}, D = diag(pi^2 |z|^2 + V),
// by power iteration on the squared operator to relative tolerance `tol`.
double gram_deviation(const GramSystem& system, double potential, double tol = 1e-6);
double gram_deviation(const SampleSet& samples, int cutoff, double potential, double tol = 1e-6);

// Default gradient-sample size for MDRM: n * ceil(n^{2/(d+2s-4)}), capped.
// CSV dump: header "row,col,value" for the matrix, then "rhs,index,value" lines.
void write_gram_csv(std::ostream& os, const GramSystem& system);

std::size_t mdrm_gradient_size(std::size_t n, int dimension, double smoothness,
                               std::size_t cap = 10'000'000);

}  // namespace pdelearn
