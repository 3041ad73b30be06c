#include "pdelearn/point_evaluator.hpp"

#include "pdelearn/errors.hpp"

namespace pdelearn {

void BatchJet::resize(std::size_t n, std::size_t d, Derivatives need) {
  count = n;
  dim = d;
  value.assign(n, 0.0);
  grad.clear();
  laplacian.clear();
  if (need != Derivatives::kValue) grad.assign(n * d, 0.0);
  if (need == Derivatives::kLaplacian) laplacian.assign(n, 0.0);
}

void PointEvaluator::evaluate_batch(std::span<const double> points, Derivatives need,
                                    BatchJet& out) const {
  const auto d = static_cast<std::size_t>(dimension());
  if (points.size() % d != 0) throw DimensionMismatch("point buffer not a multiple of dimension");
  const std::size_t n = points.size() / d;
  out.resize(n, d, need);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = points.subspan(i * d, d);
    out.value[i] = value(x);
    if (need != Derivatives::kValue) gradient(x, std::span<double>(out.grad).subspan(i * d, d));
    if (need == Derivatives::kLaplacian) out.laplacian[i] = laplacian(x);
  }
}

}  // namespace pdelearn
