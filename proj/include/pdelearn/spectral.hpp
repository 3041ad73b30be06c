#pragma once

// Real sine tensor-product basis on [0,1]^d with zero Dirichlet boundary:
//
//   phi_z(x) = prod_j sqrt(2) sin(pi z_j x_j),   z_j >= 1
//
// The phi_z are orthonormal in L2 and eigenfunctions of the Laplacian with
// eigenvalue -pi^2 ||z||^2, so -Lap + V is diagonal for constant V.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdelearn/freq_lattice.hpp"
#include "pdelearn/point_evaluator.hpp"

namespace pdelearn {

double basis_eval(const FrequencyIndex& z, std::span<const double> x);
std::vector<double> basis_grad(const FrequencyIndex& z, std::span<const double> x);
double basis_laplacian(const FrequencyIndex& z, std::span<const double> x);

// pi^2 ||z||^2, the eigenvalue of -Lap on phi_z.
double laplace_eigenvalue(std::int64_t squared_norm);
inline double laplace_eigenvalue(const FrequencyIndex& z) {
  return laplace_eigenvalue(z.squared_norm());
}

struct SpectralTerm {
  FrequencyIndex index;
  double coefficient;
};

// Finite sine expansion. Terms are kept sorted by index and unique; indices
// not stored have coefficient zero.
class SpectralFunction final : public PointEvaluator {
 public:
  explicit SpectralFunction(int dimension);
  SpectralFunction(int dimension, const std::map<FrequencyIndex, double>& coefficients);
  // Coefficients aligned with the lattice order of `basis`.
  SpectralFunction(const FrequencySet& basis, std::span<const double> coefficients);

  int dimension() const override { return dimension_; }
  const std::vector<SpectralTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double coefficient(const FrequencyIndex& z) const;
  // Largest component over all stored indices (0 for the zero function).
  int max_frequency() const;

  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  double laplacian(std::span<const double> x) const override;
  void evaluate_batch(std::span<const double> points, Derivatives need,
                      BatchJet& out) const override;

  SpectralFunction& operator+=(const SpectralFunction& other);
  SpectralFunction& operator-=(const SpectralFunction& other);
  SpectralFunction& operator*=(double scale);

 private:
  void add_scaled(const SpectralFunction& other, double scale);
  void evaluate_point(std::span<const double> x, Derivatives need, double* value, double* grad,
                      double* lap, std::vector<double>& scratch) const;

  int dimension_;
  std::vector<SpectralTerm> terms_;
};

SpectralFunction operator+(SpectralFunction a, const SpectralFunction& b);
SpectralFunction operator-(SpectralFunction a, const SpectralFunction& b);
SpectralFunction operator*(double scale, SpectralFunction a);

inline double evaluate(const SpectralFunction& u, std::span<const double> x) { return u.value(x); }

// order 0: sqrt(sum u_z^2)
// order 1: sqrt(sum u_z^2 (1 + pi^2 |z|^2))      L2 + gradient-L2
// order 2: sqrt(sum u_z^2 (1 + pi^4 |z|^4))      L2 + Laplacian-L2
double sobolev_norm(const SpectralFunction& u, int order);

// Bessel-potential norm sqrt(sum u_z^2 (1 + pi^2 |z|^2)^gamma) for real
// gamma >= 0; equals sobolev_norm for gamma in {0, 1}.
double bessel_norm(const SpectralFunction& u, double gamma);

// f_z = (pi^2 |z|^2 + V) u_z
SpectralFunction forward_map(const SpectralFunction& u, double potential);

// u_z = |z|^{-s} for every z in {1..z_truth}^d.
SpectralFunction make_powerlaw_truth(int dimension, double smoothness, int z_truth);

// Keeps exactly the coefficients with max_j z_j <= cutoff.
SpectralFunction truncate(const SpectralFunction& u, int cutoff);

// -Lap u + V u = f on the cube, u = 0 on the boundary, V constant.
struct SchrodingerProblem {
  int dimension;
  double potential;
  SpectralFunction truth;
  SpectralFunction source;
};

SchrodingerProblem make_problem(SpectralFunction truth, double potential);

// Text records: header "dim=d", then one "z_1 ... z_d coefficient" line per
// stored term, coefficients printed with 17 significant digits.
void write_spectral(std::ostream& os, const SpectralFunction& u);
SpectralFunction read_spectral(std::istream& is);
std::string to_text(const SpectralFunction& u);

}  // namespace pdelearn
