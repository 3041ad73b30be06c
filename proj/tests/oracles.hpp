#pragma once

// Independent numerical oracles used only by the tests.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

// Composite Simpson on [a, b] with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

// Tensor composite Simpson on [0,1]^2.
inline double simpson2(const std::function<double(double, double)>& f, int panels) {
  const double h = 1.0 / panels;
  auto w = [&](int i) { return (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
  double acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    for (int j = 0; j <= panels; ++j) acc += w(i) * w(j) * f(i * h, j * h);
  }
  return acc * h * h / 9.0;
}

// Central difference of f along axis j.
inline double central_diff(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> x, std::size_t j, double h) {
  x[j] += h;
  const double fp = f(x);
  x[j] -= 2.0 * h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

// Five-point second-difference Laplacian.
inline double fd_laplacian(const std::function<double(std::span<const double>)>& f,
                           std::vector<double> x, double h) {
  const double f0 = f(x);
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    x[j] = xj + h;
    const double fp = f(x);
    x[j] = xj - h;
    const double fm = f(x);
    x[j] = xj;
    acc += (fp - 2.0 * f0 + fm) / (h * h);
  }
  return acc;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace oracle
