#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gausscap/errors.hpp"
#include "gausscap/gaussian_state.hpp"
#include "gausscap/symplectic.hpp"

namespace gausscap {

/// Linear Bosonic map with Gaussian factor: on Weyl operators
/// T*[V'(z')] = V(Kᵀz') f(z'), f(z') = exp(−½ z'ᵀ Y z').
///
/// Covers channels and non-CP maps such as a channel composed with
/// transposition. K is 2s'×2s, Y is symmetric 2s'×2s'.
struct LinearBosonicMap {
  Matrix k;
  Matrix y;
  SymplecticForm form_in;
  SymplecticForm form_out;

  /// Δ'' = Δ' − KΔKᵀ, the antisymmetric form governing complete positivity.
  Matrix difference_form() const;
};

/// Composition with transposition (time reversal) on the input: Δ → −Δ in
/// the difference form, K and Y unchanged. Applying it twice is the identity.
LinearBosonicMap transpose_compose(const LinearBosonicMap& map);

enum class ChannelValidity { valid, invalid, undetermined };

class GaussianChannel {
 public:
  /// Throws std::invalid_argument on shape errors or if Y is not symmetric
  /// PSD. Complete positivity is evaluated once and cached; it is
  /// `undetermined` when Δ'' is degenerate and the channel is not noiseless
  /// symplectic.
  GaussianChannel(Matrix k, Matrix y, SymplecticForm form_in, SymplecticForm form_out);

  static GaussianChannel identity(int modes, double hbar = 1.0);

  const Matrix& k() const noexcept { return map_.k; }
  const Matrix& y() const noexcept { return map_.y; }
  const SymplecticForm& form_in() const noexcept { return map_.form_in; }
  const SymplecticForm& form_out() const noexcept { return map_.form_out; }
  const LinearBosonicMap& map() const noexcept { return map_; }
  ChannelValidity validity() const noexcept { return validity_; }

  /// f(z) = exp(−½ zᵀYz).
  double noise_factor(const Vector& z) const;

 private:
  LinearBosonicMap map_;
  ChannelValidity validity_;
};

/// Environment of a dilation R' = KR + K_E R_E.
///
/// The environment form may be zero (a classical Gaussian environment), in
/// which case only α_E ≥ 0 is required.
class Dilation {
 public:
  Dilation(Matrix k_env, const GaussianState& env);
  /// Classical environment: Δ_E = 0, α_E must be PSD.
  static Dilation classical(Matrix k_env, CovarianceMatrix env_cov);
  /// Joint environment of two dilations acting on the same system.
  static Dilation combine(const Dilation& a, const Dilation& b);

  const Matrix& k_env() const noexcept { return k_env_; }
  const Matrix& env_cov() const noexcept { return env_cov_; }
  const Matrix& env_form() const noexcept { return env_form_; }

 private:
  Dilation(Matrix k_env, Matrix env_cov, Matrix env_form);

  Matrix k_env_;
  Matrix env_cov_;
  Matrix env_form_;
};

/// Y = K_E α_E K_Eᵀ and Δ' = KΔKᵀ + K_E Δ_E K_Eᵀ. If `expected_out` is
/// given it must agree with the composed form. Throws InvalidDilation when
/// the composed form is not a nondegenerate commutation matrix or disagrees.
GaussianChannel from_dilation(const Matrix& k, const Dilation& dilation, const SymplecticForm& form_in,
                              const std::optional<SymplecticForm>& expected_out = std::nullopt);

/// Attenuator (k < 1) or amplifier (k > 1) with vacuum environment followed
/// by classical Gaussian noise of variance nc, built from its dilation.
GaussianChannel attenuation_amplification_channel(double k, double nc, double hbar = 1.0);

/// m' = Km, α' = KαKᵀ + Y.
GaussianState apply(const GaussianChannel& ch, const GaussianState& st);

/// second ∘ first.
GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first);
/// Parallel (tensor-product) channel.
GaussianChannel direct_sum(const GaussianChannel& a, const GaussianChannel& b);

struct NoiseDecomposition {
  Matrix delta_pp;                  ///< Δ''
  Matrix scaling;                   ///< A with Δ''(z₁,z₂) = Δ(A⁻¹z₁, A⁻¹z₂)
  std::vector<double> mode_gammas;  ///< per-mode γ_ℓ of the noise operator
  bool boundary = false;            ///< some γ_ℓ vanishes (no Gaussian noise on that mode)
};

/// Finds A with Δ''(z₁,z₂) = Δ(A⁻¹z₁, A⁻¹z₂) for the canonical Δ and takes
/// the normal modes of AᵀYA, i.e. the thermal parameters of the operator ρ
/// with Tr(ρV(z)) = f(Az). Decoupled blocks of (K, Y, Δ, Δ') are processed
/// independently. Throws UnsupportedChannel if Δ'' is degenerate.
NoiseDecomposition noise_decomposition(const LinearBosonicMap& map);
NoiseDecomposition noise_decomposition(const GaussianChannel& ch, bool transpose_composed);

/// Complete positivity: every γ_ℓ ≥ 1/2 − 1e-9. Noiseless symplectic maps
/// short-circuit to true. Throws UnsupportedChannel for other degenerate Δ''.
bool is_valid_channel(const LinearBosonicMap& map);
bool is_valid_channel(const GaussianChannel& ch);

/// Entropy exchange H(ρ,T) from the purification of the input.
double entropy_exchange(const GaussianChannel& ch, const GaussianState& st);
/// I(ρ,T) = H(ρ) + H(T[ρ]) − H(ρ,T).
double mutual_info(const GaussianChannel& ch, const GaussianState& st);
/// J(ρ,T) = H(T[ρ]) − H(ρ,T).
double coherent_info(const GaussianChannel& ch, const GaussianState& st);

/// Upper bound on Q_Θ = log ‖TΘ‖_cb: Σ_ℓ log max{1, 1/(2γ_ℓ)} over the modes
/// of the transposed noise decomposition; +∞ if some γ_ℓ = 0. The trace norm
/// of the noise operator only bounds the cb-norm from above, so the value is
/// itself an upper bound on Q_Θ.
double q_theta(const GaussianChannel& ch);

/// Quadratic form ε with Sp(εα) = ⟨a†a⟩ + s/2 summed over modes: I/(2ħ).
Matrix photon_number_energy(int modes, double hbar = 1.0);

struct MaximizerOptions {
  int max_iterations = 200;
  double min_improvement = 1e-8;
  double initial_step = 0.25;
  double min_step = 1e-5;
};

struct MutualInfoMaximum {
  GaussianState input;
  double mutual_info;
  int iterations;
  bool closed_form;  ///< thermal input of a one-mode gauge-invariant problem
};

/// Thrown when the ascent does not settle within the iteration cap; carries
/// the best input found.
class MaximizationFailure : public NumericFailure {
 public:
  MaximizationFailure(const std::string& what, MutualInfoMaximum best)
      : NumericFailure(what), best_(std::move(best)) {}
  const MutualInfoMaximum& best() const noexcept { return best_; }

 private:
  MutualInfoMaximum best_;
};

/// Maximizes I(ρ,T) over zero-mean Gaussian inputs with
/// Sp(εα) − Sp(εα_vac) ≤ budget (energy above the vacuum). The returned
/// input saturates the constraint. One-mode gauge-invariant problems use the
/// thermal input directly; otherwise projected coordinate ascent over
/// symplectic and thermal normal-mode parameters is used.
MutualInfoMaximum maximize_mutual_info_gaussian(const GaussianChannel& ch, const Matrix& energy, double budget,
                                                const MaximizerOptions& options = {});

}  // namespace gausscap
