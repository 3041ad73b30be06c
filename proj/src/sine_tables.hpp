#pragma once

// Per-axis tables of sqrt(2) sin(pi k x_j) and its derivative, shared by
// spectral evaluation and Gram assembly.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace pdelearn::detail {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kPi = std::numbers::pi;

// Layout: axis-major, (max_freq + 1) entries per axis, slot 0 unused.
struct SineTables {
  std::size_t dim = 0;
  std::size_t stride = 0;
  std::vector<double> sin_v;  // sqrt(2) sin(pi k x_j)
  std::vector<double> dsin_v; // sqrt(2) pi k cos(pi k x_j)

  void fill(std::span<const double> x, int max_freq, bool with_derivative) {
    dim = x.size();
    stride = static_cast<std::size_t>(max_freq) + 1;
    sin_v.resize(dim * stride);
    if (with_derivative) dsin_v.resize(dim * stride);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = 1; k < stride; ++k) {
        const double arg = kPi * static_cast<double>(k) * x[j];
        sin_v[j * stride + k] = kSqrt2 * std::sin(arg);
        if (with_derivative) {
          dsin_v[j * stride + k] = kSqrt2 * kPi * static_cast<double>(k) * std::cos(arg);
        }
      }
    }
  }

  double s(std::size_t axis, int k) const { return sin_v[axis * stride + static_cast<std::size_t>(k)]; }
  double ds(std::size_t axis, int k) const {
    return dsin_v[axis * stride + static_cast<std::size_t>(k)];
  }

  // phi_z and its gradient; prefix/suffix products avoid dividing by a zero
  // sine factor.
  double value(std::span<const int> z) const {
    double p = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j) p *= s(j, z[j]);
    return p;
  }

  void gradient(std::span<const int> z, double* out, std::vector<double>& scratch) const {
    const std::size_t d = z.size();
    scratch.resize(d + 1);
    scratch[d] = 1.0;
    for (std::size_t j = d; j-- > 0;) scratch[j] = scratch[j + 1] * s(j, z[j]);
    double prefix = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = prefix * ds(j, z[j]) * scratch[j + 1];
      prefix *= s(j, z[j]);
    }
  }
};

}  // namespace pdelearn::detail
