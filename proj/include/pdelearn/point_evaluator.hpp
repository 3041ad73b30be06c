#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdelearn {

// How many derivatives a batch evaluation must produce. Each level includes
// the ones before it.
enum class Derivatives { kValue, kGradient, kLaplacian };

// Values at `count` points; grad is count x dim row-major. Unrequested
// fields are left empty.
struct BatchJet {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> laplacian;

  void resize(std::size_t n, std::size_t d, Derivatives need);
};

// Anything that can be evaluated with its input gradient and Laplacian on
// the unit cube: spectral expansions, networks, closed-form truths.
class PointEvaluator {
 public:
  virtual ~PointEvaluator() = default;

  virtual int dimension() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  virtual double laplacian(std::span<const double> x) const = 0;

  // points is count x dim row-major. The default loops over the pointwise
  // methods; batched implementations override it.
  virtual void evaluate_batch(std::span<const double> points, Derivatives need,
                              BatchJet& out) const;
};

}  // namespace pdelearn
