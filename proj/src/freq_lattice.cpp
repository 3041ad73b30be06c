#include "pdelearn/freq_lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdelearn/errors.hpp"

namespace pdelearn {

FrequencyIndex::FrequencyIndex(std::vector<int> components) : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("frequency index must have at least one component");
  for (int c : components_) {
    if (c < 1) throw DomainError("frequency index component " + std::to_string(c) + " < 1");
  }
}

FrequencyIndex::FrequencyIndex(std::initializer_list<int> components)
    : FrequencyIndex(std::vector<int>(components)) {}

FrequencyIndex::FrequencyIndex(std::span<const int> components)
    : FrequencyIndex(std::vector<int>(components.begin(), components.end())) {}

std::int64_t FrequencyIndex::squared_norm() const {
  std::int64_t s = 0;
  for (int c : components_) s += std::int64_t{c} * c;
  return s;
}

double FrequencyIndex::euclidean_norm() const {
  return std::sqrt(static_cast<double>(squared_norm()));
}

int FrequencyIndex::max_norm() const {
  int m = 0;
  for (int c : components_) m = c > m ? c : m;
  return m;
}

double euclidean_norm(const FrequencyIndex& z) { return z.euclidean_norm(); }

std::uint64_t lattice_size(int dimension, int cutoff) {
  std::uint64_t total = 1;
  const auto base = static_cast<std::uint64_t>(cutoff);
  for (int j = 0; j < dimension; ++j) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= base;
  }
  return total;
}

FrequencySet::FrequencySet(int dimension, int cutoff, std::uint64_t cap)
    : dimension_(dimension), cutoff_(cutoff) {
  if (dimension < 1) throw DomainError("lattice dimension must be >= 1");
  if (cutoff < 1) throw DomainError("lattice cutoff must be >= 1");
  const std::uint64_t total = lattice_size(dimension, cutoff);
  if (total > cap) {
    throw SizeError("lattice size " + std::to_string(cutoff) + "^" + std::to_string(dimension) +
                    " = " + std::to_string(total) + " exceeds cap " + std::to_string(cap));
  }
  size_ = static_cast<std::size_t>(total);
  const auto d = static_cast<std::size_t>(dimension);
  flat_.resize(size_ * d);
  squared_norms_.resize(size_);

  // Odometer with the last coordinate fastest gives lexicographic order.
  std::vector<int> z(d, 1);
  for (std::size_t i = 0; i < size_; ++i) {
    std::int64_t sq = 0;
    for (std::size_t j = 0; j < d; ++j) {
      flat_[i * d + j] = z[j];
      sq += std::int64_t{z[j]} * z[j];
    }
    squared_norms_[i] = sq;
    for (std::size_t j = d; j-- > 0;) {
      if (++z[j] <= cutoff) break;
      z[j] = 1;
    }
  }
}

std::size_t FrequencySet::position(std::span<const int> z) const {
  if (z.size() != static_cast<std::size_t>(dimension_)) return size_;
  std::size_t pos = 0;
  for (int c : z) {
    if (c < 1 || c > cutoff_) return size_;
    pos = pos * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(c - 1);
  }
  return pos;
}

}  // namespace pdelearn
