#include "pdelearn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pdelearn/errors.hpp"
#include "sine_tables.hpp"

namespace pdelearn {

using detail::kPi;
using detail::kSqrt2;

namespace {

void check_dims(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw DimensionMismatch("point has dimension " + std::to_string(got) + ", expected " +
                            std::to_string(expected));
  }
}

bool index_less(const SpectralTerm& a, const SpectralTerm& b) { return a.index < b.index; }

}  // namespace

double laplace_eigenvalue(std::int64_t squared_norm) {
  return kPi * kPi * static_cast<double>(squared_norm);
}

double basis_eval(const FrequencyIndex& z, std::span<const double> x) {
  check_dims(z.dimension(), x.size());
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) p *= kSqrt2 * std::sin(kPi * z[j] * x[j]);
  return p;
}

std::vector<double> basis_grad(const FrequencyIndex& z, std::span<const double> x) {
  check_dims(z.dimension(), x.size());
  detail::SineTables tables;
  tables.fill(x, z.max_norm(), true);
  std::vector<double> out(x.size());
  std::vector<double> scratch;
  tables.gradient(z.components(), out.data(), scratch);
  return out;
}

double basis_laplacian(const FrequencyIndex& z, std::span<const double> x) {
  return -laplace_eigenvalue(z) * basis_eval(z, x);
}

SpectralFunction::SpectralFunction(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw DomainError("spectral function dimension must be >= 1");
}

SpectralFunction::SpectralFunction(int dimension,
                                   const std::map<FrequencyIndex, double>& coefficients)
    : SpectralFunction(dimension) {
  terms_.reserve(coefficients.size());
  for (const auto& [z, c] : coefficients) {
    check_dims(static_cast<std::size_t>(dimension), z.dimension());
    terms_.push_back({z, c});
  }
}

SpectralFunction::SpectralFunction(const FrequencySet& basis, std::span<const double> coefficients)
    : SpectralFunction(basis.dimension()) {
  if (coefficients.size() != basis.size()) {
    throw DimensionMismatch("coefficient vector does not match basis size");
  }
  terms_.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) terms_.push_back({basis[i], coefficients[i]});
}

double SpectralFunction::coefficient(const FrequencyIndex& z) const {
  const SpectralTerm probe{z, 0.0};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, index_less);
  return (it != terms_.end() && it->index == z) ? it->coefficient : 0.0;
}

int SpectralFunction::max_frequency() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.index.max_norm());
  return m;
}

void SpectralFunction::evaluate_point(std::span<const double> x, Derivatives need, double* value,
                                      double* grad, double* lap,
                                      std::vector<double>& scratch) const {
  const auto d = static_cast<std::size_t>(dimension_);
  *value = 0.0;
  if (grad != nullptr) std::fill(grad, grad + d, 0.0);
  if (lap != nullptr) *lap = 0.0;
  if (terms_.empty()) return;

  thread_local detail::SineTables tables;
  thread_local std::vector<double> term_grad;
  const bool with_grad = need != Derivatives::kValue;
  tables.fill(x, max_frequency(), with_grad);
  term_grad.resize(d);
  for (const auto& t : terms_) {
    const auto z = t.index.components();
    const double phi = tables.value(z);
    *value += t.coefficient * phi;
    if (lap != nullptr) *lap -= t.coefficient * laplace_eigenvalue(t.index) * phi;
    if (with_grad && grad != nullptr) {
      tables.gradient(z, term_grad.data(), scratch);
      for (std::size_t j = 0; j < d; ++j) grad[j] += t.coefficient * term_grad[j];
    }
  }
}

double SpectralFunction::value(std::span<const double> x) const {
  check_dims(static_cast<std::size_t>(dimension_), x.size());
  double v = 0.0;
  std::vector<double> scratch;
  evaluate_point(x, Derivatives::kValue, &v, nullptr, nullptr, scratch);
  return v;
}

void SpectralFunction::gradient(std::span<const double> x, std::span<double> out) const {
  check_dims(static_cast<std::size_t>(dimension_), x.size());
  check_dims(static_cast<std::size_t>(dimension_), out.size());
  double v = 0.0;
  std::vector<double> scratch;
  evaluate_point(x, Derivatives::kGradient, &v, out.data(), nullptr, scratch);
}

double SpectralFunction::laplacian(std::span<const double> x) const {
  check_dims(static_cast<std::size_t>(dimension_), x.size());
  double v = 0.0;
  double lap = 0.0;
  std::vector<double> scratch;
  evaluate_point(x, Derivatives::kValue, &v, nullptr, &lap, scratch);
  return lap;
}

void SpectralFunction::evaluate_batch(std::span<const double> points, Derivatives need,
                                      BatchJet& out) const {
  const auto d = static_cast<std::size_t>(dimension_);
  if (points.size() % d != 0) throw DimensionMismatch("point buffer not a multiple of dimension");
  const std::size_t n = points.size() / d;
  out.resize(n, d, need);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    evaluate_point(points.subspan(i * d, d), need, &out.value[i],
                   need == Derivatives::kValue ? nullptr : out.grad.data() + i * d,
                   need == Derivatives::kLaplacian ? &out.laplacian[i] : nullptr, scratch);
  }
}

void SpectralFunction::add_scaled(const SpectralFunction& other, double scale) {
  if (other.dimension_ != dimension_) {
    throw DimensionMismatch("spectral functions of different dimension");
  }
  std::vector<SpectralTerm> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->index < b->index)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->index < a->index) {
      merged.push_back({b->index, scale * b->coefficient});
      ++b;
    } else {
      merged.push_back({a->index, a->coefficient + scale * b->coefficient});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

SpectralFunction& SpectralFunction::operator+=(const SpectralFunction& other) {
  add_scaled(other, 1.0);
  return *this;
}

SpectralFunction& SpectralFunction::operator-=(const SpectralFunction& other) {
  add_scaled(other, -1.0);
  return *this;
}

SpectralFunction& SpectralFunction::operator*=(double scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  return *this;
}

SpectralFunction operator+(SpectralFunction a, const SpectralFunction& b) { return a += b; }
SpectralFunction operator-(SpectralFunction a, const SpectralFunction& b) { return a -= b; }
SpectralFunction operator*(double scale, SpectralFunction a) { return a *= scale; }

double sobolev_norm(const SpectralFunction& u, int order) {
  if (order < 0 || order > 2) {
    throw DomainError("unsupported Sobolev order " + std::to_string(order));
  }
  double acc = 0.0;
  for (const auto& t : u.terms()) {
    const double lam = laplace_eigenvalue(t.index);
    const double w = order == 0 ? 1.0 : order == 1 ? 1.0 + lam : 1.0 + lam * lam;
    acc += t.coefficient * t.coefficient * w;
  }
  return std::sqrt(acc);
}

double bessel_norm(const SpectralFunction& u, double gamma) {
  if (gamma < 0.0) throw DomainError("Bessel norm order must be >= 0");
  double acc = 0.0;
  for (const auto& t : u.terms()) {
    acc += t.coefficient * t.coefficient * std::pow(1.0 + laplace_eigenvalue(t.index), gamma);
  }
  return std::sqrt(acc);
}

SpectralFunction forward_map(const SpectralFunction& u, double potential) {
  if (!(potential > 0.0)) throw DomainError("potential V must be > 0");
  std::map<FrequencyIndex, double> coeffs;
  for (const auto& t : u.terms()) {
    coeffs.emplace(t.index, (laplace_eigenvalue(t.index) + potential) * t.coefficient);
  }
  return SpectralFunction(u.dimension(), coeffs);
}

SpectralFunction make_powerlaw_truth(int dimension, double smoothness, int z_truth) {
  const FrequencySet set(dimension, z_truth);
  std::vector<double> coeffs(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    coeffs[i] = std::pow(static_cast<double>(set.squared_norm(i)), -0.5 * smoothness);
  }
  return SpectralFunction(set, coeffs);
}

SpectralFunction truncate(const SpectralFunction& u, int cutoff) {
  if (cutoff < 1) throw DomainError("truncation cutoff must be >= 1");
  std::map<FrequencyIndex, double> kept;
  for (const auto& t : u.terms()) {
    if (t.index.max_norm() <= cutoff) kept.emplace(t.index, t.coefficient);
  }
  return SpectralFunction(u.dimension(), kept);
}

SchrodingerProblem make_problem(SpectralFunction truth, double potential) {
  SpectralFunction source = forward_map(truth, potential);
  const int d = truth.dimension();
  return SchrodingerProblem{d, potential, std::move(truth), std::move(source)};
}

void write_spectral(std::ostream& os, const SpectralFunction& u) {
  os << "dim=" << u.dimension() << '\n';
  const auto old_precision = os.precision(17);
  for (const auto& t : u.terms()) {
    for (int c : t.index.components()) os << c << ' ';
    os << t.coefficient << '\n';
  }
  os.precision(old_precision);
}

SpectralFunction read_spectral(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("dim=", 0) != 0) {
    throw DomainError("spectral record must start with 'dim=d'");
  }
  const int d = std::stoi(line.substr(4));
  std::map<FrequencyIndex, double> coeffs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<int> z(static_cast<std::size_t>(d));
    for (int& c : z) {
      if (!(ls >> c)) throw DomainError("malformed spectral record: " + line);
    }
    double c = 0.0;
    if (!(ls >> c)) throw DomainError("malformed spectral record: " + line);
    coeffs[FrequencyIndex(std::move(z))] += c;
  }
  return SpectralFunction(d, coeffs);
}

std::string to_text(const SpectralFunction& u) {
  std::ostringstream os;
  write_spectral(os, u);
  return os.str();
}

}  // namespace pdelearn
