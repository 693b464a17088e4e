#include "gausscap/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "gausscap/errors.hpp"

namespace gausscap {
namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

bool is_skew(const Matrix& m, double tol) {
  return m.rows() == m.cols() && (m + m.transpose()).cwiseAbs().maxCoeff() <= tol * scale_of(m);
}

void require_square_even(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw std::invalid_argument(std::string(what) + " must be a nonempty square matrix of even size, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Matrix checked_inverse(const Matrix& delta) {
  Eigen::FullPivLU<Matrix> lu(delta);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw std::invalid_argument("commutation matrix is degenerate");
  return lu.inverse();
}

// Symmetric square root of a PSD matrix; eigenvalues within round-off of zero
// are clamped.
Matrix psd_sqrt(const Matrix& alpha) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(alpha);
  if (es.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  const Vector& ev = es.eigenvalues();
  const double tol = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  if (ev.minCoeff() < -tol) {
    throw std::invalid_argument("covariance matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(ev.minCoeff()) + ")");
  }
  const Vector root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

SymplecticSpectrum pair_up(std::vector<double> moduli) {
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  SymplecticSpectrum out;
  out.gammas.reserve(moduli.size() / 2);
  for (std::size_t j = 0; j + 1 < moduli.size(); j += 2) out.gammas.push_back(0.5 * (moduli[j] + moduli[j + 1]));
  return out;
}

void require_compatible(const Matrix& alpha, const Matrix& delta) {
  require_square_even(delta, "commutation matrix");
  if (alpha.rows() != delta.rows() || alpha.cols() != delta.cols()) {
    throw std::invalid_argument("covariance is " + std::to_string(alpha.rows()) + "x" +
                                std::to_string(alpha.cols()) + " but commutation matrix is " +
                                std::to_string(delta.rows()) + "x" + std::to_string(delta.cols()));
  }
}

}  // namespace

SymplecticForm SymplecticForm::canonical(int modes, double hbar) {
  if (modes < 1) throw std::invalid_argument("mode count must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  Matrix m = Matrix::Zero(2 * modes, 2 * modes);
  Matrix inv = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    m(2 * j, 2 * j + 1) = hbar;
    m(2 * j + 1, 2 * j) = -hbar;
    inv(2 * j, 2 * j + 1) = -1.0 / hbar;
    inv(2 * j + 1, 2 * j) = 1.0 / hbar;
  }
  return SymplecticForm(std::move(m), std::move(inv), hbar);
}

SymplecticForm SymplecticForm::from_matrix(Matrix m, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  require_square_even(m, "commutation matrix");
  if (!is_skew(m, kShapeTolerance)) throw std::invalid_argument("commutation matrix is not skew-symmetric");
  m = 0.5 * (m - m.transpose()).eval();
  Matrix inv = checked_inverse(m);
  return SymplecticForm(std::move(m), std::move(inv), hbar);
}

SymplecticForm SymplecticForm::reflected() const { return SymplecticForm(-matrix_, -inverse_, hbar_); }

bool SymplecticForm::is_canonical() const { return approx_equal(canonical(modes(), hbar_)); }

bool SymplecticForm::approx_equal(const SymplecticForm& other, double tol) const {
  if (dim() != other.dim()) return false;
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff() <= tol * scale_of(matrix_);
}

CovarianceMatrix::CovarianceMatrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("covariance matrix must be square and nonempty");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kShapeTolerance * scale_of(m)) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
  matrix_ = 0.5 * (m + m.transpose());
}

double SymplecticSpectrum::min() const {
  return gammas.empty() ? 0.0 : *std::min_element(gammas.begin(), gammas.end());
}

double SymplecticSpectrum::max() const {
  return gammas.empty() ? 0.0 : *std::max_element(gammas.begin(), gammas.end());
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& alpha, const SymplecticForm& delta) {
  require_compatible(alpha.matrix(), delta.matrix());
  const Matrix root = psd_sqrt(alpha.matrix());
  Matrix b = root * delta.inverse() * root;
  b = 0.5 * (b - b.transpose()).eval();
  Eigen::JacobiSVD<Matrix> svd(b);
  const Vector& sv = svd.singularValues();
  return pair_up(std::vector<double>(sv.data(), sv.data() + sv.size()));
}

SymplecticSpectrum symplectic_spectrum(const Matrix& alpha, const Matrix& delta) {
  require_compatible(alpha, delta);
  if (!is_skew(delta, kShapeTolerance)) throw std::invalid_argument("commutation matrix is not skew-symmetric");
  const Matrix inv = checked_inverse(delta);
  const Matrix sym = 0.5 * (alpha + alpha.transpose());
  const Matrix root = psd_sqrt(sym);
  Matrix b = root * inv * root;
  b = 0.5 * (b - b.transpose()).eval();
  Eigen::JacobiSVD<Matrix> svd(b);
  const Vector& sv = svd.singularValues();
  return pair_up(std::vector<double>(sv.data(), sv.data() + sv.size()));
}

SymplecticSpectrum symplectic_spectrum_general(const Matrix& alpha, const Matrix& delta) {
  require_compatible(alpha, delta);
  const Matrix m = checked_inverse(delta) * alpha;
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericFailure("general eigensolver did not converge");
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) moduli.push_back(std::abs(es.eigenvalues()[i]));
  return pair_up(std::move(moduli));
}

UncertaintyReport check_uncertainty(const CovarianceMatrix& alpha, const SymplecticForm& delta) {
  require_compatible(alpha.matrix(), delta.matrix());
  try {
    const double min_gamma = symplectic_spectrum(alpha, delta).min();
    return {min_gamma >= 0.5 - kUncertaintyTolerance, min_gamma};
  } catch (const std::invalid_argument&) {
    // Indefinite α cannot satisfy α − (i/2)Δ ≥ 0; report the general-route
    // moduli for diagnostics.
    return {false, symplectic_spectrum_general(alpha.matrix(), delta.matrix()).min()};
  }
}

Matrix matrix_function(const Matrix& m, MatrixFunction f) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix_function needs a square matrix");
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericFailure("general eigensolver did not converge");
  const Eigen::MatrixXcd s = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond < 1e10)) {
    throw NumericFailure("matrix is defective or nearly so (eigenvector condition number " + std::to_string(cond) + ")");
  }
  Eigen::VectorXcd d(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const std::complex<double> lambda = es.eigenvalues()[i];
    d[i] = f == MatrixFunction::abs ? std::complex<double>(std::abs(lambda), 0.0) : std::sqrt(lambda);
  }
  const Eigen::MatrixXcd result = s * d.asDiagonal() * s.inverse();
  const double imag = result.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-8 * std::max(1.0, result.real().cwiseAbs().maxCoeff())) {
    throw NumericFailure("matrix function result is not real (imaginary part " + std::to_string(imag) + ")");
  }
  return result.real();
}

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

SymplecticForm direct_sum(const SymplecticForm& a, const SymplecticForm& b) {
  if (std::abs(a.hbar() - b.hbar()) > 1e-12 * std::max(a.hbar(), b.hbar())) {
    throw std::invalid_argument("cannot join systems with different hbar");
  }
  return SymplecticForm::from_matrix(block_diagonal(a.matrix(), b.matrix()), a.hbar());
}

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  return CovarianceMatrix(block_diagonal(a.matrix(), b.matrix()));
}

}  // namespace gausscap
