#pragma once

#include <complex>
#include <span>

#include "gausscap/symplectic.hpp"

namespace gausscap {

/// Gaussian state with characteristic function
/// φ(z) = exp(i mᵀz − ½ zᵀαz) on the phase space (Z, Δ).
class GaussianState {
 public:
  /// Throws std::invalid_argument on dimension mismatch or if α violates the
  /// uncertainty relation α − (i/2)Δ ≥ 0.
  GaussianState(Vector mean, CovarianceMatrix cov, SymplecticForm form);
  GaussianState(CovarianceMatrix cov, SymplecticForm form);

  static GaussianState vacuum(int modes, double hbar = 1.0);
  /// One-mode thermal state with mean photon number n: α = ħ(n + 1/2)I.
  static GaussianState thermal(double n, double hbar = 1.0);
  /// Product of thermal modes.
  static GaussianState thermal(std::span<const double> ns, double hbar = 1.0);

  int modes() const noexcept { return form_.modes(); }
  const Vector& mean() const noexcept { return mean_; }
  const CovarianceMatrix& cov() const noexcept { return cov_; }
  const SymplecticForm& form() const noexcept { return form_; }

  SymplecticSpectrum spectrum() const { return symplectic_spectrum(cov_, form_); }

  /// Marginal on modes [first, first + count). The form must not couple the
  /// subsystem to the rest.
  GaussianState restrict_modes(int first, int count) const;

 private:
  Vector mean_;
  CovarianceMatrix cov_;
  SymplecticForm form_;
};

/// Gauge-invariant state described by its photon-number matrix
/// N = Tr(a ρ a†) (s×s Hermitian PSD).
struct GaugeInvariantState {
  Eigen::MatrixXcd n;
};

/// g(x) = (x+1) log(x+1) − x log x, in the configured log base.
/// Throws std::invalid_argument for x < 0.
double g_function(double x);

/// Σ_j g(γ_j − 1/2). Arguments within kUncertaintyTolerance below zero are
/// treated as zero.
double entropy_from_spectrum(const SymplecticSpectrum& spectrum);

/// von Neumann entropy of a Gaussian state (configured log base).
double entropy(const GaussianState& state);

bool is_pure(const GaussianState& state, double tol = 1e-9);

/// Off-diagonal purification block β = Δ √(−(Δ⁻¹α)² − I/4); β = −βᵀ.
Matrix purification_block(const CovarianceMatrix& alpha, const SymplecticForm& delta);

/// Pure state on 2s modes with α₁₂ = [[α, β], [βᵀ, α]] and form Δ ⊕ (−Δ).
/// The input mean is carried by the first factor; the reference has zero
/// mean.
GaussianState purify(const GaussianState& state);

/// α = ħ [[Re N + I/2, −Im N], [Im N, Re N + I/2]] in (q…, p…) block order,
/// permuted into the interleaved canonical ordering (q₁, p₁, q₂, p₂, ...).
GaussianState gauge_to_real(const GaugeInvariantState& gi, double hbar = 1.0);

std::complex<double> char_fn(const GaussianState& state, const Vector& z);

/// Trace norm of the (possibly non-positive) operator ρ_γ: max{1, 1/(2γ)}.
double thermal_trace_norm(double gamma);

}  // namespace gausscap
