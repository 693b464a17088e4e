#pragma once

#include <stdexcept>
#include <string>

namespace gausscap {

// Bad inputs (dimension mismatch, unphysical parameters, ...) are reported as
// std::invalid_argument. Everything below is specific to this library.

/// An eigen-routine failed to converge, a matrix was too close to defective,
/// or a closed form produced a value outside its mathematical range.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The channel has a degenerate difference form Δ'' = Δ' − KΔKᵀ, so the
/// noise-operator decomposition is not defined.
class UnsupportedChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dilation whose commutation matrices do not compose to the output form.
class InvalidDilation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truncated Fock computation lost more probability than allowed.
class CutoffTooSmall : public std::runtime_error {
 public:
  CutoffTooSmall(const std::string& what, double leak, int required_cutoff)
      : std::runtime_error(what), leak_(leak), required_cutoff_(required_cutoff) {}

  double leak() const noexcept { return leak_; }
  /// Best estimate of a cutoff that would succeed; 0 when no estimate exists.
  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  double leak_;
  int required_cutoff_;
};

/// A random moment-preserving perturbation could not be constructed.
class PerturbationRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gausscap
