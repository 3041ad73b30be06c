#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pdelearn/point_evaluator.hpp"
#include "pdelearn/spectral.hpp"

namespace pdelearn {

// Uniform sample points in the open unit cube with (optionally noisy)
// observations f_j = f(X_j) + eps_j, eps_j ~ Uniform[-sigma, sigma].
struct SampleSet {
  int dimension = 0;
  std::vector<double> points;  // size() x dimension, row-major
  std::vector<double> values;
  std::uint64_t seed = 0;
  double noise_halfwidth = 0.0;

  std::size_t size() const { return values.size(); }
  std::span<const double> point(std::size_t j) const {
    const auto d = static_cast<std::size_t>(dimension);
    return {points.data() + j * d, d};
  }
};

// Points only; coordinate j of point i is draw i*d + j of the seed's point
// stream.
std::vector<double> draw_points(int dimension, std::size_t n, std::uint64_t seed);

SampleSet draw_samples(const PointEvaluator& source, std::size_t n, std::uint64_t seed,
                       double noise_halfwidth);

inline SampleSet draw_samples(const SchrodingerProblem& problem, std::size_t n,
                              std::uint64_t seed, double noise_halfwidth) {
  return draw_samples(problem.source, n, seed, noise_halfwidth);
}

// CSV with header x_1,...,x_d,f
void write_samples_csv(std::ostream& os, const SampleSet& samples);

}  // namespace pdelearn
