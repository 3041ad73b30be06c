#pragma once

#include <stdexcept>
#include <string>

namespace pdelearn {

// Lattice or system would exceed the configured size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity outside its mathematical domain (nonpositive error in a log fit,
// unsupported norm order, empty sample, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double ridge_tried, double diag_min,
                      double diag_max)
      : std::runtime_error(what),
        ridge_tried_(ridge_tried),
        diag_min_(diag_min),
        diag_max_(diag_max) {}

  double ridge_tried() const { return ridge_tried_; }
  double diag_min() const { return diag_min_; }
  double diag_max() const { return diag_max_; }

 private:
  double ridge_tried_;
  double diag_min_;
  double diag_max_;
};

// Non-finite intermediate in network evaluation or training.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int layer) : std::runtime_error(what), layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pdelearn
