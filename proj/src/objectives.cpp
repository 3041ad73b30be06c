#include "pdelearn/objectives.hpp"

#include <algorithm>
#include <string>

#include "pdelearn/errors.hpp"

namespace pdelearn {

namespace {

constexpr std::size_t kChunk = 4096;

void check_samples(const PointEvaluator& u, const SampleSet& s) {
  if (s.size() == 0) throw DomainError("empty sample set");
  if (s.dimension != u.dimension()) throw DimensionMismatch("sample/evaluator dimension mismatch");
}

// Calls body(jet, first_index) on consecutive chunks, in sample order.
template <class Body>
void for_each_chunk(const PointEvaluator& u, const SampleSet& s, Derivatives need, Body&& body) {
  const auto d = static_cast<std::size_t>(s.dimension);
  BatchJet jet;
  for (std::size_t first = 0; first < s.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, s.size() - first);
    u.evaluate_batch(std::span<const double>(s.points).subspan(first * d, count * d), need, jet);
    body(jet, first);
  }
}

double half_grad_sq_sum(const PointEvaluator& u, const SampleSet& s) {
  const auto d = static_cast<std::size_t>(s.dimension);
  double total = 0.0;
  for_each_chunk(u, s, Derivatives::kGradient, [&](const BatchJet& jet, std::size_t) {
    for (std::size_t i = 0; i < jet.count; ++i) {
      double g2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) g2 += jet.grad[i * d + k] * jet.grad[i * d + k];
      total += 0.5 * g2;
    }
  });
  return total;
}

double mass_source_sum(const PointEvaluator& u, const SampleSet& s, double potential) {
  double total = 0.0;
  for_each_chunk(u, s, Derivatives::kValue, [&](const BatchJet& jet, std::size_t first) {
    for (std::size_t i = 0; i < jet.count; ++i) {
      const double v = jet.value[i];
      total += 0.5 * potential * v * v - s.values[first + i] * v;
    }
  });
  return total;
}

}  // namespace

std::string_view objective_name(Objective objective) {
  switch (objective) {
    case Objective::kDrm:
      return "DRM";
    case Objective::kPinn:
      return "PINN";
    case Objective::kMdrm:
      return "MDRM";
  }
  return "?";
}

Objective parse_objective(std::string_view name) {
  if (name == "DRM") return Objective::kDrm;
  if (name == "PINN") return Objective::kPinn;
  if (name == "MDRM") return Objective::kMdrm;
  throw ConfigError("unknown objective '" + std::string(name) + "'");
}

void MdrmSplit::validate() const {
  if (gradient_samples.size() == 0 || data_samples.size() == 0) {
    throw DomainError("MDRM split has an empty sample set");
  }
  if (gradient_samples.dimension != data_samples.dimension) {
    throw DimensionMismatch("MDRM split sets differ in dimension");
  }
  if (gradient_samples.seed == data_samples.seed) {
    throw DomainError("MDRM split sets must come from distinct seeds");
  }
  if (gradient_samples.size() < data_samples.size()) {
    throw DomainError("MDRM split requires N >= n");
  }
}

double drm_empirical(const PointEvaluator& u, const SampleSet& samples, double potential) {
  check_samples(u, samples);
  const auto d = static_cast<std::size_t>(samples.dimension);
  double total = 0.0;
  for_each_chunk(u, samples, Derivatives::kGradient, [&](const BatchJet& jet, std::size_t first) {
    for (std::size_t i = 0; i < jet.count; ++i) {
      double g2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) g2 += jet.grad[i * d + k] * jet.grad[i * d + k];
      const double v = jet.value[i];
      total += 0.5 * g2 + 0.5 * potential * v * v - samples.values[first + i] * v;
    }
  });
  return total / static_cast<double>(samples.size());
}

double pinn_empirical(const PointEvaluator& u, const SampleSet& samples, double potential) {
  check_samples(u, samples);
  double total = 0.0;
  for_each_chunk(u, samples, Derivatives::kLaplacian, [&](const BatchJet& jet, std::size_t first) {
    for (std::size_t i = 0; i < jet.count; ++i) {
      const double r = jet.laplacian[i] - potential * jet.value[i] + samples.values[first + i];
      total += r * r;
    }
  });
  return total / static_cast<double>(samples.size());
}

double mdrm_empirical(const PointEvaluator& u, const MdrmSplit& split, double potential) {
  split.validate();
  check_samples(u, split.gradient_samples);
  check_samples(u, split.data_samples);
  const double grad_term =
      half_grad_sq_sum(u, split.gradient_samples) / static_cast<double>(split.gradient_samples.size());
  const double data_term =
      mass_source_sum(u, split.data_samples, potential) / static_cast<double>(split.data_samples.size());
  return grad_term + data_term;
}

double population_energy(const SpectralFunction& u, const SchrodingerProblem& problem,
                         Objective objective) {
  if (u.dimension() != problem.dimension) throw DimensionMismatch("estimate/problem dimension");
  const double V = problem.potential;
  if (objective == Objective::kPinn) {
    // Residual coefficients r_z = (lam + V) u_z - f_z over the union of supports.
    const SpectralFunction residual = forward_map(u, V) - problem.source;
    double acc = 0.0;
    for (const auto& t : residual.terms()) acc += t.coefficient * t.coefficient;
    return acc;
  }
  double quad = 0.0;
  for (const auto& t : u.terms()) {
    quad += t.coefficient * t.coefficient * (laplace_eigenvalue(t.index) + V);
  }
  double linear = 0.0;
  for (const auto& t : u.terms()) linear += t.coefficient * problem.source.coefficient(t.index);
  return 0.5 * quad - linear;
}

double excess_energy(const SpectralFunction& u, const SchrodingerProblem& problem,
                     Objective objective) {
  return population_energy(u, problem, objective) -
         population_energy(problem.truth, problem, objective);
}

}  // namespace pdelearn
