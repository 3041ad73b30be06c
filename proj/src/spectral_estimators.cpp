#include "pdelearn/spectral_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "pdelearn/errors.hpp"
#include "pdelearn/simd/kernels.hpp"
#include "sine_tables.hpp"

namespace pdelearn {

namespace {

constexpr std::size_t kChunk = 1024;

FrequencySet make_basis(int dimension, int cutoff) {
  FrequencySet basis(dimension, cutoff);
  if (basis.size() > kMaxSpectralUnknowns) {
    throw SizeError("estimator basis has " + std::to_string(basis.size()) +
                    " unknowns, limit is " + std::to_string(kMaxSpectralUnknowns));
  }
  return basis;
}

// Basis values (K x chunk) and gradients (K x chunk*d) for a block of points.
struct Features {
  std::size_t chunk = 0;
  std::size_t count = 0;
  std::vector<double> phi;
  std::vector<double> grad;
};

void fill_features(const FrequencySet& basis, const SampleSet& s, std::size_t first,
                   std::size_t count, bool with_grad, Features& out) {
  const std::size_t K = basis.size();
  const auto d = static_cast<std::size_t>(s.dimension);
  out.chunk = kChunk;
  out.count = count;
  out.phi.resize(K * kChunk);
  if (with_grad) out.grad.resize(K * kChunk * d);
  detail::SineTables tables;
  std::vector<double> scratch;
  for (std::size_t c = 0; c < count; ++c) {
    tables.fill(s.point(first + c), basis.cutoff(), with_grad);
    for (std::size_t i = 0; i < K; ++i) {
      const auto z = basis.components(i);
      out.phi[i * kChunk + c] = tables.value(z);
      if (with_grad) tables.gradient(z, out.grad.data() + i * kChunk * d + c * d, scratch);
    }
  }
}

// A += sum over the chunk of grad-grad products (upper triangle only).
void accumulate_gradient_block(const Features& f, std::size_t K, std::size_t d,
                               Eigen::MatrixXd& a) {
  const auto& k = simd::active();
  const std::size_t len = f.count * d;
  const std::size_t stride = f.chunk * d;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i; j < K; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
          k.dot(f.grad.data() + i * stride, f.grad.data() + j * stride, len);
    }
  }
}

void accumulate_mass_block(const Features& f, std::size_t K, double potential,
                           Eigen::MatrixXd& a) {
  const auto& k = simd::active();
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i; j < K; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
          potential * k.dot(f.phi.data() + i * f.chunk, f.phi.data() + j * f.chunk, f.count);
    }
  }
}

void accumulate_rhs(const Features& f, const SampleSet& s, std::size_t first, std::size_t K,
                    Eigen::VectorXd& rhs) {
  const auto& k = simd::active();
  for (std::size_t i = 0; i < K; ++i) {
    rhs(static_cast<Eigen::Index>(i)) +=
        k.dot(f.phi.data() + i * f.chunk, s.values.data() + first, f.count);
  }
}

void symmetrize_upper(Eigen::MatrixXd& a) {
  a.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
}

Eigen::VectorXd eigen_symbol(const FrequencySet& basis, double potential) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    diag(static_cast<Eigen::Index>(i)) = laplace_eigenvalue(basis.squared_norm(i)) + potential;
  }
  return diag;
}

SpectralFunction to_function(const FrequencySet& basis, const Eigen::VectorXd& coeffs) {
  return SpectralFunction(basis, std::span<const double>(coeffs.data(), basis.size()));
}

}  // namespace

GramSystem assemble_drm_gram(const SampleSet& samples, int cutoff, double potential) {
  if (samples.size() == 0) throw DomainError("empty sample set");
  FrequencySet basis = make_basis(samples.dimension, cutoff);
  const std::size_t K = basis.size();
  const auto d = static_cast<std::size_t>(samples.dimension);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
  Features f;
  for (std::size_t first = 0; first < samples.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, samples.size() - first);
    fill_features(basis, samples, first, count, true, f);
    accumulate_gradient_block(f, K, d, a);
    accumulate_mass_block(f, K, potential, a);
    accumulate_rhs(f, samples, first, K, rhs);
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  a *= inv_n;
  rhs *= inv_n;
  symmetrize_upper(a);
  return GramSystem{std::move(basis), std::move(a), std::move(rhs)};
}

GramSystem assemble_mdrm_gram(const MdrmSplit& split, int cutoff, double potential,
                              bool exact_gradient) {
  split.validate();
  FrequencySet basis = make_basis(split.data_samples.dimension, cutoff);
  const std::size_t K = basis.size();
  const auto d = static_cast<std::size_t>(split.data_samples.dimension);
  const auto Ki = static_cast<Eigen::Index>(K);
  Eigen::MatrixXd grad_block = Eigen::MatrixXd::Zero(Ki, Ki);
  Features f;
  if (exact_gradient) {
    grad_block.diagonal() = eigen_symbol(basis, 0.0);
  } else {
    const SampleSet& g = split.gradient_samples;
    for (std::size_t first = 0; first < g.size(); first += kChunk) {
      const std::size_t count = std::min(kChunk, g.size() - first);
      fill_features(basis, g, first, count, true, f);
      accumulate_gradient_block(f, K, d, grad_block);
    }
    grad_block /= static_cast<double>(g.size());
    symmetrize_upper(grad_block);
  }

  Eigen::MatrixXd mass_block = Eigen::MatrixXd::Zero(Ki, Ki);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Ki);
  const SampleSet& s = split.data_samples;
  for (std::size_t first = 0; first < s.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, s.size() - first);
    fill_features(basis, s, first, count, false, f);
    accumulate_mass_block(f, K, potential, mass_block);
    accumulate_rhs(f, s, first, K, rhs);
  }
  const double inv_n = 1.0 / static_cast<double>(s.size());
  mass_block *= inv_n;
  rhs *= inv_n;
  symmetrize_upper(mass_block);
  return GramSystem{std::move(basis), grad_block + mass_block, std::move(rhs)};
}

Eigen::MatrixXd expected_gram(const FrequencySet& basis, double potential) {
  return eigen_symbol(basis, potential).asDiagonal();
}

Eigen::VectorXd exact_rhs(const FrequencySet& basis, const SpectralFunction& source) {
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    rhs(static_cast<Eigen::Index>(i)) = source.coefficient(basis[i]);
  }
  return rhs;
}

DrmFit solve_gram(const GramSystem& system, double ridge) {
  if (ridge < 0.0) throw DomainError("ridge must be >= 0");
  const Eigen::Index K = system.matrix.rows();
  const double scale = system.matrix.trace() / static_cast<double>(K);
  constexpr double kMaxRidge = 1e-6;
  double relative = ridge;
  while (true) {
    const double shift = relative * scale;
    Eigen::MatrixXd shifted = system.matrix;
    shifted.diagonal().array() += shift;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd u = llt.solve(system.rhs);
      if (u.allFinite()) return DrmFit{to_function(system.basis, u), shift};
    }
    if (relative >= kMaxRidge) break;
    relative = std::min(kMaxRidge, std::max(relative, 1e-12) * 10.0);
  }
  const auto diag = system.matrix.diagonal();
  throw SingularSystemError("Gram system not positive definite after ridge escalation to " +
                                std::to_string(kMaxRidge) + " (diag range [" +
                                std::to_string(diag.minCoeff()) + ", " +
                                std::to_string(diag.maxCoeff()) + "])",
                            kMaxRidge * scale, diag.minCoeff(), diag.maxCoeff());
}

SpectralFunction fit_drm(const SampleSet& samples, int cutoff, double potential, double ridge) {
  return solve_gram(assemble_drm_gram(samples, cutoff, potential), ridge).estimate;
}

SpectralFunction fit_mdrm(const MdrmSplit& split, int cutoff, double potential, double ridge) {
  return solve_gram(assemble_mdrm_gram(split, cutoff, potential), ridge).estimate;
}

PinnFit fit_pinn_detailed(const SampleSet& samples, int cutoff, double potential) {
  if (samples.size() == 0) throw DomainError("empty sample set");
  FrequencySet basis = make_basis(samples.dimension, cutoff);
  const std::size_t K = basis.size();
  const std::size_t n = samples.size();
  const Eigen::VectorXd symbol = eigen_symbol(basis, potential);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(K));
  detail::SineTables tables;
  for (std::size_t j = 0; j < n; ++j) {
    tables.fill(samples.point(j), cutoff, false);
    for (std::size_t i = 0; i < K; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      m(static_cast<Eigen::Index>(j), ii) = symbol(ii) * tables.value(basis.components(i));
    }
  }
  const Eigen::Map<const Eigen::VectorXd> y(samples.values.data(), static_cast<Eigen::Index>(n));
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  Eigen::VectorXd u = cod.solve(y);
  const Eigen::Index rank = cod.rank();
  return PinnFit{to_function(basis, u), rank};
}

SpectralFunction fit_oracle(const SampleSet& samples, int cutoff, double potential) {
  if (samples.size() == 0) throw DomainError("empty sample set");
  const FrequencySet basis = make_basis(samples.dimension, cutoff);
  const std::size_t K = basis.size();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
  Features f;
  for (std::size_t first = 0; first < samples.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, samples.size() - first);
    fill_features(basis, samples, first, count, false, f);
    accumulate_rhs(f, samples, first, K, rhs);
  }
  rhs /= static_cast<double>(samples.size());
  const Eigen::VectorXd u = rhs.cwiseQuotient(eigen_symbol(basis, potential));
  return to_function(basis, u);
}

SpectralFunction fit_oracle_exact(const SpectralFunction& source, int cutoff, double potential) {
  const FrequencySet basis = make_basis(source.dimension(), cutoff);
  const Eigen::VectorXd u = exact_rhs(basis, source).cwiseQuotient(eigen_symbol(basis, potential));
  return to_function(basis, u);
}

double gram_deviation(const GramSystem& system, double potential, double tol) {
  const Eigen::VectorXd symbol = eigen_symbol(system.basis, potential);
  const Eigen::VectorXd inv_sqrt = symbol.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m = system.matrix;
  m.diagonal() -= symbol;
  m = inv_sqrt.asDiagonal() * m * inv_sqrt.asDiagonal();
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Power iteration on M^2 (positive semidefinite), Rayleigh quotient
  // ||M v||^2 for unit v estimates the top eigenvalue of M^2.
  const Eigen::Index K = m.rows();
  Eigen::VectorXd v(K);
  for (Eigen::Index i = 0; i < K; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i % 7);
  v.normalize();
  double estimate = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const Eigen::VectorXd mv = m * v;
    const double next = mv.norm();
    Eigen::VectorXd w = m * mv;
    const double wn = w.norm();
    if (wn == 0.0) return next;
    v = w / wn;
    if (iter > 0 && std::abs(next - estimate) <= tol * next) return next;
    estimate = next;
  }
  return estimate;
}

double gram_deviation(const SampleSet& samples, int cutoff, double potential, double tol) {
  return gram_deviation(assemble_drm_gram(samples, cutoff, potential), potential, tol);
}

std::size_t mdrm_gradient_size(std::size_t n, int dimension, double smoothness, std::size_t cap) {
  const double denom = static_cast<double>(dimension) + 2.0 * smoothness - 4.0;
  if (!(denom > 0.0)) throw DomainError("MDRM split rule needs d + 2s - 4 > 0");
  const double factor = std::ceil(std::pow(static_cast<double>(n), 2.0 / denom));
  const double total = static_cast<double>(n) * factor;
  return total >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(total);
}

void write_gram_csv(std::ostream& os, const GramSystem& system) {
  const auto old_precision = os.precision(17);
  os << "row,col,value\n";
  for (Eigen::Index i = 0; i < system.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < system.matrix.cols(); ++j) {
      os << i << ',' << j << ',' << system.matrix(i, j) << '\n';
    }
  }
  for (Eigen::Index i = 0; i < system.rhs.size(); ++i) os << "rhs," << i << ',' << system.rhs(i) << '\n';
  os.precision(old_precision);
}

}  // namespace pdelearn
