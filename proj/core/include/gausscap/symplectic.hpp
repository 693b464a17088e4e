#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gausscap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance for symmetry / skew-symmetry checks.
inline constexpr double kShapeTolerance = 1e-10;
/// Slack allowed below γ = 1/2 before a covariance is declared unphysical.
inline constexpr double kUncertaintyTolerance = 1e-9;

/// Commutation matrix Δ of 2s canonical variables.
///
/// The canonical form is block diagonal with s blocks [[0, ħ], [−ħ, 0]]
/// (ordering q₁, p₁, q₂, p₂, ...). Arbitrary nondegenerate skew-symmetric
/// matrices are accepted as well; ħ is then only used for unit bookkeeping.
class SymplecticForm {
 public:
  static SymplecticForm canonical(int modes, double hbar = 1.0);
  /// Throws std::invalid_argument unless `m` is square, of even size,
  /// skew-symmetric and invertible.
  static SymplecticForm from_matrix(Matrix m, double hbar = 1.0);

  int modes() const noexcept { return static_cast<int>(matrix_.rows() / 2); }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  double hbar() const noexcept { return hbar_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Matrix& inverse() const noexcept { return inverse_; }

  /// −Δ, the form of a time-reversed (transposed) system.
  SymplecticForm reflected() const;
  bool is_canonical() const;
  bool approx_equal(const SymplecticForm& other, double tol = kShapeTolerance) const;

 private:
  SymplecticForm(Matrix m, Matrix inv, double hbar)
      : matrix_(std::move(m)), inverse_(std::move(inv)), hbar_(hbar) {}

  Matrix matrix_;
  Matrix inverse_;
  double hbar_;
};

/// Real symmetric correlation matrix α (units of ħ).
class CovarianceMatrix {
 public:
  /// Throws std::invalid_argument if `m` is not square and symmetric within
  /// kShapeTolerance (relative); the stored matrix is exactly symmetrized.
  explicit CovarianceMatrix(Matrix m);

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  Matrix matrix_;
};

/// Moduli γ_j of the eigenvalue pairs ±iγ_j of Δ⁻¹α, sorted descending.
struct SymplecticSpectrum {
  std::vector<double> gammas;

  double min() const;
  double max() const;
  std::size_t size() const noexcept { return gammas.size(); }
};

/// Stable route: singular values of α^{1/2} Δ⁻¹ α^{1/2} (an antisymmetric
/// matrix), which come in equal pairs. Requires α positive semidefinite;
/// singular α (pure modes, noiseless channels) is fine.
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& alpha, const SymplecticForm& delta);
/// Same, for a raw skew-symmetric form matrix that is not necessarily a
/// SymplecticForm (e.g. the difference form of a channel). `delta` must be
/// invertible.
SymplecticSpectrum symplectic_spectrum(const Matrix& alpha, const Matrix& delta);

/// Cross-check route: moduli of the eigenvalues of the real nonsymmetric
/// matrix Δ⁻¹α from a general eigen-routine, paired the same way.
SymplecticSpectrum symplectic_spectrum_general(const Matrix& alpha, const Matrix& delta);

struct UncertaintyReport {
  bool valid;
  double min_gamma;
};

/// α − (i/2)Δ ≥ 0, checked as min γ_j ≥ 1/2 − kUncertaintyTolerance.
UncertaintyReport check_uncertainty(const CovarianceMatrix& alpha, const SymplecticForm& delta);

enum class MatrixFunction { abs, sqrt };

/// S f(diag(m_j)) S⁻¹ for a diagonalizable real matrix M = S diag(m_j) S⁻¹.
/// `sqrt` is the principal branch. Throws NumericFailure if M is (near)
/// defective or if the result is not real.
Matrix matrix_function(const Matrix& m, MatrixFunction f);

/// Block-diagonal stacking. Forms must share ħ.
SymplecticForm direct_sum(const SymplecticForm& a, const SymplecticForm& b);
CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// Block-diagonal stacking of plain matrices.
Matrix block_diagonal(const Matrix& a, const Matrix& b);

}  // namespace gausscap
