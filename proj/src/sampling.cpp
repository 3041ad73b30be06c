#include "pdelearn/sampling.hpp"

#include <ostream>

#include "pdelearn/errors.hpp"
#include "pdelearn/rng.hpp"

namespace pdelearn {

namespace {
constexpr std::uint64_t kPointStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
}  // namespace

std::vector<double> draw_points(int dimension, std::size_t n, std::uint64_t seed) {
  if (dimension < 1) throw DomainError("sample dimension must be >= 1");
  const auto d = static_cast<std::size_t>(dimension);
  const CounterRng rng(seed, kPointStream);
  std::vector<double> pts(n * d);
  // uniform() never returns 0 or 1, so every point is strictly interior.
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = rng.uniform(k);
  return pts;
}

SampleSet draw_samples(const PointEvaluator& source, std::size_t n, std::uint64_t seed,
                       double noise_halfwidth) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  if (noise_halfwidth < 0.0) throw DomainError("noise half-width must be >= 0");
  SampleSet s;
  s.dimension = source.dimension();
  s.seed = seed;
  s.noise_halfwidth = noise_halfwidth;
  s.points = draw_points(s.dimension, n, seed);
  BatchJet jet;
  source.evaluate_batch(s.points, Derivatives::kValue, jet);
  s.values = std::move(jet.value);
  if (noise_halfwidth > 0.0) {
    const CounterRng noise(seed, kNoiseStream);
    for (std::size_t j = 0; j < n; ++j) {
      s.values[j] += noise.uniform(j, -noise_halfwidth, noise_halfwidth);
    }
  }
  return s;
}

void write_samples_csv(std::ostream& os, const SampleSet& samples) {
  for (int j = 1; j <= samples.dimension; ++j) os << "x_" << j << ',';
  os << "f\n";
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (double c : samples.point(i)) os << c << ',';
    os << samples.values[i] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace pdelearn
