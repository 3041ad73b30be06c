#include "pdelearn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdelearn/errors.hpp"
#include "pdelearn/rng.hpp"
#include "pdelearn/sampling.hpp"

namespace pdelearn {

double spectral_error(const SpectralFunction& estimate, const SpectralFunction& truth, int order) {
  if (estimate.dimension() != truth.dimension()) {
    throw DimensionMismatch("estimate and truth differ in dimension");
  }
  return sobolev_norm(estimate - truth, order);
}

McEstimate mc_error(const PointEvaluator& estimate, const PointEvaluator& truth, int order,
                    std::size_t points, std::uint64_t seed) {
  if (order < 0 || order > 2) throw DomainError("unsupported error order " + std::to_string(order));
  if (points < 1000) throw DomainError("Monte-Carlo error needs at least 1000 points");
  if (estimate.dimension() != truth.dimension()) {
    throw DimensionMismatch("estimate and truth differ in dimension");
  }
  const auto d = static_cast<std::size_t>(truth.dimension());
  const Derivatives need = order == 0   ? Derivatives::kValue
                           : order == 1 ? Derivatives::kGradient
                                        : Derivatives::kLaplacian;
  // Stream 7 keeps evaluation points disjoint from any training stream of the same seed.
  const std::vector<double> pts = draw_points(truth.dimension(), points, hash_seed({seed, 7}));

  constexpr std::size_t kChunk = 4096;
  BatchJet a;
  BatchJet b;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t first = 0; first < points; first += kChunk) {
    const std::size_t count = std::min(kChunk, points - first);
    const auto block = std::span<const double>(pts).subspan(first * d, count * d);
    estimate.evaluate_batch(block, need, a);
    truth.evaluate_batch(block, need, b);
    for (std::size_t i = 0; i < count; ++i) {
      const double dv = a.value[i] - b.value[i];
      double q = dv * dv;
      if (order == 1) {
        for (std::size_t k = 0; k < d; ++k) {
          const double dg = a.grad[i * d + k] - b.grad[i * d + k];
          q += dg * dg;
        }
      } else if (order == 2) {
        const double dl = a.laplacian[i] - b.laplacian[i];
        q += dl * dl;
      }
      sum += q;
      sum_sq += q * q;
    }
  }
  const double m = static_cast<double>(points);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
  McEstimate out;
  out.value = std::sqrt(mean);
  out.std_error = mean > 0.0 ? std::sqrt(var / m) / (2.0 * out.value) : 0.0;
  return out;
}

}  // namespace pdelearn
