#pragma once

// Empirical and population losses for the Deep Ritz (DRM), physics-informed
// (PINN) and split-sample Modified Deep Ritz (MDRM) objectives. |Omega| = 1.

#include <string_view>

#include "pdelearn/point_evaluator.hpp"
#include "pdelearn/sampling.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn {

enum class Objective { kDrm, kPinn, kMdrm };

std::string_view objective_name(Objective objective);
Objective parse_objective(std::string_view name);

// The gradient term of MDRM is estimated on its own (larger) sample.
struct MdrmSplit {
  SampleSet gradient_samples;
  SampleSet data_samples;

  // Throws DomainError unless both sets are nonempty, share a dimension,
  // come from distinct seeds and N >= n.
  void validate() const;
};

// (1/n) sum_j [ 1/2 |grad u(X_j)|^2 + 1/2 V u(X_j)^2 - f_j u(X_j) ]
double drm_empirical(const PointEvaluator& u, const SampleSet& samples, double potential);

// (1/n) sum_j ( Lap u(X_j) - V u(X_j) + f_j )^2
double pinn_empirical(const PointEvaluator& u, const SampleSet& samples, double potential);

// (1/N) sum_i 1/2 |grad u(X'_i)|^2 + (1/n) sum_j [ 1/2 V u(X_j)^2 - f_j u(X_j) ]
double mdrm_empirical(const PointEvaluator& u, const MdrmSplit& split, double potential);

// Closed forms on the sine eigenbasis (constant V):
//   DRM : 1/2 sum u_z^2 (pi^2|z|^2 + V) - sum u_z f_z
//   PINN: sum ((pi^2|z|^2 + V) u_z - f_z)^2
// MDRM has the same population energy as DRM.
double population_energy(const SpectralFunction& u, const SchrodingerProblem& problem,
                         Objective objective);

// population_energy(u) - population_energy(u*), reported raw (not clamped).
double excess_energy(const SpectralFunction& u, const SchrodingerProblem& problem,
                     Objective objective);

}  // namespace pdelearn
