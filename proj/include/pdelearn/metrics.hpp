#pragma once

#include <cstddef>
#include <cstdint>

#include "pdelearn/point_evaluator.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn {

inline constexpr std::size_t kDefaultMcPoints = 100'000;

// Exact coefficient-space distance sobolev_norm(u_hat - truth, order).
double spectral_error(const SpectralFunction& estimate, const SpectralFunction& truth, int order);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo Sobolev distance on `points` fresh uniform points:
//   order 0: mean (u - u*)^2
//   order 1: mean (u - u*)^2 + |grad u - grad u*|^2
//   order 2: mean (u - u*)^2 + (Lap u - Lap u*)^2
// The square root of the mean is returned with a delta-method standard error.
McEstimate mc_error(const PointEvaluator& estimate, const PointEvaluator& truth, int order,
                    std::size_t points, std::uint64_t seed);

}  // namespace pdelearn
