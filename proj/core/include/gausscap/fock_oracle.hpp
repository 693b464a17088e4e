#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace gausscap::fock {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Maximal truncation leak accepted for a thermal input.
inline constexpr double kStateLeakTolerance = 1e-8;
/// Maximal leak accepted after a channel has been applied.
inline constexpr double kChannelLeakTolerance = 1e-6;

/// Density matrix on span{|0⟩, ..., |cutoff−1⟩}. Truncation is never
/// renormalized; the lost probability is reported by leak().
struct FockDensity {
  CMatrix matrix;

  int cutoff() const noexcept { return static_cast<int>(matrix.rows()); }
  double leak() const { return 1.0 - matrix.trace().real(); }
};

/// Operator on the truncated space.
struct FockOperator {
  CMatrix matrix;

  int cutoff() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// a|n⟩ = √n |n−1⟩.
FockOperator annihilation(int cutoff);

/// Exact matrix elements ⟨m|D(α)|j⟩, m, j < cutoff, of D(α) = exp(αa† − ᾱa).
FockOperator displacement(std::complex<double> alpha, int cutoff);

/// Geometric distribution with mean n. Throws CutoffTooSmall if the leak
/// (n/(n+1))^cutoff reaches kStateLeakTolerance.
FockDensity thermal_fock(double n, int cutoff);

/// −Σ λ log λ over eigenvalues above 1e-14 (configured log base).
double vn_entropy(const FockDensity& rho);
/// Same for a Hermitian matrix given directly.
double vn_entropy(const CMatrix& hermitian);

enum class AttenuationRoute { kraus, unitary };

/// Pure-loss channel a' = ka + √(1−k²)a₀ with vacuum a₀, 0 ≤ k ≤ 1.
/// The Kraus route uses A_l|n⟩ = √C(n,l) k^{n−l} (1−k²)^{l/2} |n−l⟩; the
/// unitary route exponentiates the beam-splitter generator on each
/// total-photon-number block of system ⊗ environment. Accepts any operator;
/// throws CutoffTooSmall if a density input leaks more than
/// kChannelLeakTolerance.
FockDensity attenuate_fock(const FockDensity& rho, double k, AttenuationRoute route = AttenuationRoute::kraus);
CMatrix attenuate_operator(const CMatrix& op, double k, AttenuationRoute route = AttenuationRoute::kraus);

/// Gauss–Hermite rule for ∫ f(t) e^{−t²} dt: nodes ascending, weights summing to √π.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int node_count);

/// Random displacement by a complex Gaussian variable with E|z|² = nc,
/// integrated with a node_count × node_count Gauss–Hermite product rule.
/// The output is truncated to the input cutoff; throws CutoffTooSmall if the
/// result leaks more than kChannelLeakTolerance.
FockDensity classical_noise_fock(const FockDensity& rho, double nc, int node_count = 24);
CMatrix classical_noise_operator(const CMatrix& op, double nc, int node_count = 24);

/// Attenuation by k ≤ 1 followed by classical noise nc. Amplification is
/// outside the oracle.
struct ChannelSpec {
  double k = 1.0;
  double nc = 0.0;
};

/// Phase-covariant channel in transfer form: |p⟩⟨p+d| is mapped to
/// Σ_j T_d(j, p) |j⟩⟨j+d|, d ≥ 0 (negative offsets follow by adjoint).
class FockChannel {
 public:
  FockChannel(ChannelSpec spec, int cutoff, int node_count = 24);

  const ChannelSpec& spec() const noexcept { return spec_; }
  int cutoff() const noexcept { return cutoff_; }
  /// (cutoff − d) × (cutoff − d) matrix, rows: output pair index j,
  /// columns: input pair index p.
  const CMatrix& transfer(int d) const;

  CMatrix apply(const CMatrix& op) const;
  /// Throws CutoffTooSmall if the output leak exceeds kChannelLeakTolerance.
  FockDensity apply(const FockDensity& rho) const;

 private:
  ChannelSpec spec_;
  int cutoff_;
  std::vector<CMatrix> transfer_;
};

/// Σ_n √p_n |n⟩|n⟩ in the basis index m·cutoff + r (system m, reference r).
CVector purified_thermal(double n, int cutoff);

/// Partial trace of an operator on (cutoff ⊗ cutoff) with index
/// m·cutoff + r: keep_system = true traces out the second factor.
CMatrix partial_trace(const CMatrix& joint, int cutoff, bool keep_system);

/// Entropy of (T ⊗ id)|ψ⟩⟨ψ| for the purification of a Fock-diagonal input.
/// The joint state splits into blocks labelled by (system − reference)
/// photon number, which are diagonalized separately.
double exchange_entropy_fock(const FockChannel& channel, const FockDensity& diagonal_input);
/// Thermal input with mean n; throws CutoffTooSmall for excessive leak.
double exchange_entropy_fock(const ChannelSpec& spec, double n, int cutoff);

/// I = H(ρ) + H(T[ρ]) − H(ρ, T) for a Fock-diagonal input.
double mutual_info_fock(const FockChannel& channel, const FockDensity& diagonal_input);

/// Σ_{n<cutoff} |ρ_γ eigenvalue| for ρ_γ = (γ+½)⁻¹ Σ rⁿ|n⟩⟨n|,
/// r = (γ−½)/(γ+½). Throws CutoffTooSmall if the neglected tail exceeds 1e-8.
double trace_norm_fock(double gamma, int cutoff);

struct ProbeOptions {
  int cutoff = 30;
  int levels = 4;        ///< perturbation support |0⟩..|levels⟩
  double mixing = -1.0;  ///< weight of the perturbation; < 0 draws it from the seed
};

struct ProbeResult {
  double i_gaussian = 0.0;
  double i_perturbed = 0.0;
  double mixing = 0.0;
  std::vector<double> populations;  ///< Fock populations of the perturbed input
};

/// Mixes the thermal input with a random Fock-diagonal state refitted to
/// the same mean photon number. First and second moments are preserved
/// (⟨a⟩ = ⟨a²⟩ = 0, same ⟨a†a⟩). Throws PerturbationRejected if the refit
/// fails.
ProbeResult gaussian_maximality_probe(const ChannelSpec& spec, double n, std::uint64_t seed,
                                      const ProbeOptions& options = {});
/// Same with a given perturbation (populations on |0⟩, |1⟩, ...).
ProbeResult gaussian_maximality_probe(const ChannelSpec& spec, double n, const std::vector<double>& perturbation,
                                      double mixing, int cutoff = 30);

}  // namespace gausscap::fock
