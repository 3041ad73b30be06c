#pragma once

// Multi-index lattice {1..xi}^d indexing the truncated sine basis.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace pdelearn {

inline constexpr std::uint64_t kDefaultLatticeCap = std::uint64_t{1} << 24;

class FrequencyIndex {
 public:
  FrequencyIndex() = default;
  // Throws DomainError if any component is < 1 or the index is empty.
  explicit FrequencyIndex(std::vector<int> components);
  FrequencyIndex(std::initializer_list<int> components);
  explicit FrequencyIndex(std::span<const int> components);

  std::size_t dimension() const { return components_.size(); }
  int operator[](std::size_t j) const { return components_[j]; }
  std::span<const int> components() const { return components_; }

  // ||z||^2 = sum z_j^2
  std::int64_t squared_norm() const;
  double euclidean_norm() const;
  int max_norm() const;

  auto operator<=>(const FrequencyIndex&) const = default;
  bool operator==(const FrequencyIndex&) const = default;

 private:
  std::vector<int> components_;
};

double euclidean_norm(const FrequencyIndex& z);

// All z with 1 <= z_j <= cutoff, lexicographic order, stored flat.
class FrequencySet {
 public:
  FrequencySet(int dimension, int cutoff, std::uint64_t cap = kDefaultLatticeCap);

  int dimension() const { return dimension_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return size_; }

  std::span<const int> components(std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
  }
  FrequencyIndex operator[](std::size_t i) const { return FrequencyIndex(components(i)); }
  std::int64_t squared_norm(std::size_t i) const { return squared_norms_[i]; }

  // Position of z in the lexicographic order, or size() if z is outside the set.
  std::size_t position(std::span<const int> z) const;

 private:
  int dimension_;
  int cutoff_;
  std::size_t size_;
  std::vector<int> flat_;
  std::vector<std::int64_t> squared_norms_;
};

inline FrequencySet enumerate(int dimension, int cutoff,
                              std::uint64_t cap = kDefaultLatticeCap) {
  return FrequencySet(dimension, cutoff, cap);
}

// cutoff^dimension, saturating at UINT64_MAX.
std::uint64_t lattice_size(int dimension, int cutoff);

}  // namespace pdelearn
