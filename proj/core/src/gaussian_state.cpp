#include "gausscap/gaussian_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "gausscap/errors.hpp"
#include "gausscap/units.hpp"

namespace gausscap {

GaussianState::GaussianState(Vector mean, CovarianceMatrix cov, SymplecticForm form)
    : mean_(std::move(mean)), cov_(std::move(cov)), form_(std::move(form)) {
  if (cov_.dim() != form_.dim()) {
    throw std::invalid_argument("covariance dimension " + std::to_string(cov_.dim()) +
                                " does not match form dimension " + std::to_string(form_.dim()));
  }
  if (mean_.size() != form_.dim()) throw std::invalid_argument("mean vector has wrong length");
  const auto report = check_uncertainty(cov_, form_);
  if (!report.valid) {
    throw std::invalid_argument("covariance violates the uncertainty relation (min gamma " +
                                std::to_string(report.min_gamma) + " < 1/2)");
  }
}

GaussianState::GaussianState(CovarianceMatrix cov, SymplecticForm form)
    : GaussianState(Vector::Zero(form.dim()), std::move(cov), form) {}

GaussianState GaussianState::vacuum(int modes, double hbar) {
  auto form = SymplecticForm::canonical(modes, hbar);
  return GaussianState(CovarianceMatrix(0.5 * hbar * Matrix::Identity(2 * modes, 2 * modes)), std::move(form));
}

GaussianState GaussianState::thermal(double n, double hbar) {
  const double ns[] = {n};
  return thermal(ns, hbar);
}

GaussianState GaussianState::thermal(std::span<const double> ns, double hbar) {
  const int modes = static_cast<int>(ns.size());
  Matrix alpha = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    if (!(ns[j] >= 0.0)) throw std::invalid_argument("thermal photon number must be nonnegative");
    alpha(2 * j, 2 * j) = alpha(2 * j + 1, 2 * j + 1) = hbar * (ns[j] + 0.5);
  }
  return GaussianState(CovarianceMatrix(std::move(alpha)), SymplecticForm::canonical(modes, hbar));
}

GaussianState GaussianState::restrict_modes(int first, int count) const {
  if (first < 0 || count < 1 || first + count > modes()) throw std::invalid_argument("mode range out of bounds");
  const int b = 2 * first;
  const int n = 2 * count;
  const Matrix& d = form_.matrix();
  double coupling = 0.0;
  if (b > 0) coupling = std::max(coupling, d.block(b, 0, n, b).cwiseAbs().maxCoeff());
  if (b + n < form_.dim()) coupling = std::max(coupling, d.block(b, b + n, n, form_.dim() - b - n).cwiseAbs().maxCoeff());
  if (coupling > kShapeTolerance * std::max(1.0, d.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("commutation matrix couples the requested modes to the rest");
  }
  return GaussianState(mean_.segment(b, n), CovarianceMatrix(cov_.matrix().block(b, b, n, n)),
                       SymplecticForm::from_matrix(d.block(b, b, n, n), form_.hbar()));
}

double g_function(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("g(x) is defined for x >= 0, got " + std::to_string(x));
  if (x < 1e-12) return 0.0;
  double nats;
  if (x < 1e-6) {
    nats = x * (1.0 - std::log(x)) + 0.5 * x * x;
  } else if (x < 1.0) {
    nats = (x + 1.0) * std::log1p(x) - x * std::log(x);
  } else {
    nats = std::log1p(x) + x * std::log1p(1.0 / x);
  }
  return from_nats(nats);
}

double entropy_from_spectrum(const SymplecticSpectrum& spectrum) {
  double h = 0.0;
  for (double gamma : spectrum.gammas) {
    double x = gamma - 0.5;
    if (x < 0.0 && x >= -kUncertaintyTolerance) x = 0.0;
    h += g_function(x);
  }
  return h;
}

double entropy(const GaussianState& state) { return entropy_from_spectrum(state.spectrum()); }

bool is_pure(const GaussianState& state, double tol) {
  const auto spec = state.spectrum();
  return std::all_of(spec.gammas.begin(), spec.gammas.end(), [tol](double g) { return std::abs(g - 0.5) <= tol; });
}

Matrix purification_block(const CovarianceMatrix& alpha, const SymplecticForm& delta) {
  if (alpha.dim() != delta.dim()) throw std::invalid_argument("covariance and form dimensions differ");
  // With B = α^{1/2} Δ⁻¹ α^{1/2} (antisymmetric), Δ⁻¹α = α^{-1/2} B α^{1/2}, so
  // √(−(Δ⁻¹α)² − I/4) = α^{-1/2} √(BᵀB − I/4) α^{1/2} and only symmetric
  // eigenproblems are needed. A physical α is positive definite.
  Eigen::SelfAdjointEigenSolver<Matrix> ea(alpha.matrix());
  if (ea.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  if (!(ea.eigenvalues().minCoeff() > 0.0)) throw std::invalid_argument("purification needs a positive definite covariance");
  const Matrix& v = ea.eigenvectors();
  const Vector root = ea.eigenvalues().cwiseSqrt();
  const Matrix a_half = v * root.asDiagonal() * v.transpose();
  const Matrix a_mhalf = v * root.cwiseInverse().asDiagonal() * v.transpose();

  Matrix b = a_half * delta.inverse() * a_half;
  b = 0.5 * (b - b.transpose()).eval();
  const Matrix n = Matrix::Identity(b.rows(), b.cols()) * -0.25 + b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> en(0.5 * (n + n.transpose()));
  if (en.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  if (en.eigenvalues().minCoeff() < -1e-8) {
    throw std::invalid_argument("covariance violates the uncertainty relation; cannot purify");
  }
  const Vector c_diag = en.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix c = en.eigenvectors() * c_diag.asDiagonal() * en.eigenvectors().transpose();

  Matrix beta = delta.matrix() * a_mhalf * c * a_half;
  return 0.5 * (beta - beta.transpose());
}

GaussianState purify(const GaussianState& state) {
  const int d = state.form().dim();
  const Matrix& alpha = state.cov().matrix();
  const Matrix beta = purification_block(state.cov(), state.form());
  Matrix joint(2 * d, 2 * d);
  joint << alpha, beta, beta.transpose(), alpha;
  Vector mean = Vector::Zero(2 * d);
  mean.head(d) = state.mean();
  return GaussianState(std::move(mean), CovarianceMatrix(std::move(joint)),
                       direct_sum(state.form(), state.form().reflected()));
}

GaussianState gauge_to_real(const GaugeInvariantState& gi, double hbar) {
  const auto& n = gi.n;
  if (n.rows() != n.cols() || n.rows() == 0) throw std::invalid_argument("photon-number matrix must be square");
  const double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
  if ((n - n.adjoint()).cwiseAbs().maxCoeff() > kShapeTolerance * scale) {
    throw std::invalid_argument("photon-number matrix is not Hermitian");
  }
  const Eigen::MatrixXcd herm = 0.5 * (n + n.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument("photon-number matrix is not positive semidefinite");
  }
  const int s = static_cast<int>(n.rows());
  const Matrix re = herm.real();
  const Matrix im = herm.imag();
  Matrix alpha(2 * s, 2 * s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double diag = re(i, j) + (i == j ? 0.5 : 0.0);
      alpha(2 * i, 2 * j) = hbar * diag;          // (q_i, q_j)
      alpha(2 * i + 1, 2 * j + 1) = hbar * diag;  // (p_i, p_j)
      alpha(2 * i, 2 * j + 1) = -hbar * im(i, j); // (q_i, p_j)
      alpha(2 * i + 1, 2 * j) = hbar * im(i, j);  // (p_i, q_j)
    }
  }
  return GaussianState(CovarianceMatrix(std::move(alpha)), SymplecticForm::canonical(s, hbar));
}

std::complex<double> char_fn(const GaussianState& state, const Vector& z) {
  if (z.size() != state.form().dim()) throw std::invalid_argument("phase-space vector has wrong length");
  const double quad = z.dot(state.cov().matrix() * z);
  return std::exp(std::complex<double>(-0.5 * quad, state.mean().dot(z)));
}

double thermal_trace_norm(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  return std::max(1.0, 1.0 / (2.0 * gamma));
}

}  // namespace gausscap
