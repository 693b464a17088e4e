#include "gausscap/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "gausscap/errors.hpp"
#include "gausscap/units.hpp"

namespace gausscap::fock {
namespace {

using cd = std::complex<double>;

void check_cutoff(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
}

void check_square(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("Fock operator must be square and nonempty");
}

int geometric_cutoff(double mean, double tol) {
  if (!(mean > 0.0)) return 1;
  const double r = mean / (mean + 1.0);
  return static_cast<int>(std::ceil(std::log(tol) / std::log(r)));
}

double mean_photons(const CMatrix& rho) {
  double m = 0.0;
  for (int j = 0; j < rho.rows(); ++j) m += j * rho(j, j).real();
  return m;
}

void check_channel_leak(const FockDensity& out) {
  const double leak = out.leak();
  if (leak > kChannelLeakTolerance) {
    const int needed = std::max(out.cutoff() + 1, geometric_cutoff(mean_photons(out.matrix), 0.1 * kChannelLeakTolerance));
    throw CutoffTooSmall("channel output leaks " + std::to_string(leak) + " beyond cutoff " +
                             std::to_string(out.cutoff()),
                         leak, needed);
  }
}

// √C(n,l) k^{n−l} (1−k²)^{l/2}
double kraus_coefficient(int n, int l, double k) {
  const double binom = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0)));
  return binom * std::pow(k, n - l) * std::pow(1.0 - k * k, 0.5 * l);
}

void check_loss(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("oracle attenuation needs 0 <= k <= 1");
}

// Columns s of the beam-splitter unitary on the block of total photon number
// s: u[s](j) = ⟨j, s−j| U |s, 0⟩.
std::vector<Eigen::VectorXd> beam_splitter_columns(double k, int cutoff) {
  const double theta = std::acos(k);
  std::vector<Eigen::VectorXd> cols(cutoff);
  for (int s = 0; s < cutoff; ++s) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s + 1, s + 1);
    for (int m = 0; m < s; ++m) {
      const double amp = std::sqrt((m + 1.0) * (s - m));
      g(m + 1, m) = amp;
      g(m, m + 1) = -amp;
    }
    const Eigen::MatrixXd u = (theta * g).exp();
    cols[s] = u.col(s);
  }
  return cols;
}

}  // namespace

FockOperator annihilation(int cutoff) {
  check_cutoff(cutoff);
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a};
}

FockOperator displacement(std::complex<double> alpha, int cutoff) {
  check_cutoff(cutoff);
  CMatrix d(cutoff, cutoff);
  const double base = std::exp(-0.5 * std::norm(alpha));
  d(0, 0) = base;
  for (int m = 1; m < cutoff; ++m) d(m, 0) = d(m - 1, 0) * alpha / std::sqrt(static_cast<double>(m));
  for (int j = 1; j < cutoff; ++j) d(0, j) = d(0, j - 1) * (-std::conj(alpha)) / std::sqrt(static_cast<double>(j));
  for (int m = 0; m + 1 < cutoff; ++m) {
    const double inv = 1.0 / std::sqrt(m + 1.0);
    for (int j = 1; j < cutoff; ++j) {
      d(m + 1, j) = (std::sqrt(static_cast<double>(j)) * d(m, j - 1) + alpha * d(m, j)) * inv;
    }
  }
  return {d};
}

FockDensity thermal_fock(double n, int cutoff) {
  check_cutoff(cutoff);
  if (!std::isfinite(n) || n < 0.0) throw std::invalid_argument("mean photon number must be finite and >= 0");
  const double r = n / (n + 1.0);
  const double leak = std::pow(r, cutoff);
  if (leak >= kStateLeakTolerance) {
    throw CutoffTooSmall("thermal state with N = " + std::to_string(n) + " leaks " + std::to_string(leak) +
                             " at cutoff " + std::to_string(cutoff),
                         leak, geometric_cutoff(n, kStateLeakTolerance));
  }
  CMatrix rho = CMatrix::Zero(cutoff, cutoff);
  double p = 1.0 / (n + 1.0);
  for (int j = 0; j < cutoff; ++j) {
    rho(j, j) = p;
    p *= r;
  }
  return {rho};
}

double vn_entropy(const CMatrix& hermitian) {
  check_square(hermitian);
  const CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericFailure("Hermitian eigensolver did not converge");
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-14) s -= l * std::log(l);
  }
  return from_nats(s);
}

double vn_entropy(const FockDensity& rho) { return vn_entropy(rho.matrix); }

CMatrix attenuate_operator(const CMatrix& op, double k, AttenuationRoute route) {
  check_square(op);
  check_loss(k);
  const int c = static_cast<int>(op.rows());
  CMatrix out = CMatrix::Zero(c, c);
  if (route == AttenuationRoute::kraus) {
    for (int l = 0; l < c; ++l) {
      for (int j = 0; j + l < c; ++j) {
        const double aj = kraus_coefficient(j + l, l, k);
        for (int jp = 0; jp + l < c; ++jp) {
          out(j, jp) += aj * kraus_coefficient(jp + l, l, k) * op(j + l, jp + l);
        }
      }
    }
    return out;
  }
  const auto u = beam_splitter_columns(k, c);
  for (int l = 0; l < c; ++l) {
    for (int j = 0; j + l < c; ++j) {
      const double aj = u[j + l](j);
      for (int jp = 0; jp + l < c; ++jp) out(j, jp) += aj * u[jp + l](jp) * op(j + l, jp + l);
    }
  }
  return out;
}

FockDensity attenuate_fock(const FockDensity& rho, double k, AttenuationRoute route) {
  FockDensity out{attenuate_operator(rho.matrix, k, route)};
  check_channel_leak(out);
  return out;
}

GaussHermite gauss_hermite(int node_count) {
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(node_count, node_count);
  for (int i = 1; i < node_count; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(0.5 * i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) throw NumericFailure("Golub-Welsch eigensolver did not converge");
  GaussHermite gh;
  const double sqrt_pi = std::sqrt(std::acos(-1.0));
  for (int i = 0; i < node_count; ++i) {
    gh.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    gh.weights.push_back(sqrt_pi * v0 * v0);
  }
  return gh;
}

namespace {

// Visits every quadrature node α with probability weight w (weights sum to 1).
template <typename F>
void for_each_noise_node(double nc, int node_count, F&& f) {
  const auto gh = gauss_hermite(node_count);
  const double scale = std::sqrt(nc);
  const double pi = std::acos(-1.0);
  for (int a = 0; a < node_count; ++a) {
    for (int b = 0; b < node_count; ++b) {
      const double w = gh.weights[a] * gh.weights[b] / pi;
      f(cd(scale * gh.nodes[a], scale * gh.nodes[b]), w);
    }
  }
}

void check_noise(double nc) {
  if (!std::isfinite(nc) || nc < 0.0) throw std::invalid_argument("noise variance must be finite and >= 0");
}

}  // namespace

CMatrix classical_noise_operator(const CMatrix& op, double nc, int node_count) {
  check_square(op);
  check_noise(nc);
  if (nc == 0.0) return op;
  const int c = static_cast<int>(op.rows());
  CMatrix out = CMatrix::Zero(c, c);
  for_each_noise_node(nc, node_count, [&](cd alpha, double w) {
    const CMatrix d = displacement(alpha, c).matrix;
    out.noalias() += w * (d * op * d.adjoint());
  });
  return out;
}

FockDensity classical_noise_fock(const FockDensity& rho, double nc, int node_count) {
  FockDensity out{classical_noise_operator(rho.matrix, nc, node_count)};
  check_channel_leak(out);
  return out;
}

FockChannel::FockChannel(ChannelSpec spec, int cutoff, int node_count) : spec_(spec), cutoff_(cutoff) {
  check_cutoff(cutoff);
  check_loss(spec.k);
  check_noise(spec.nc);
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  const int c = cutoff;

  std::vector<CMatrix> atten(c);
  for (int d = 0; d < c; ++d) {
    const int len = c - d;
    atten[d] = CMatrix::Zero(len, len);
    for (int p = 0; p < len; ++p) {
      for (int j = 0; j <= p; ++j) {
        const int l = p - j;
        atten[d](j, p) = kraus_coefficient(p, l, spec.k) * kraus_coefficient(p + d, l, spec.k);
      }
    }
  }

  if (spec.nc == 0.0) {
    transfer_ = std::move(atten);
    return;
  }

  // Only offset-preserving terms are kept: the exact channel is phase
  // covariant, the product quadrature grid only approximately so.
  std::vector<CMatrix> noise(c);
  for (int d = 0; d < c; ++d) noise[d] = CMatrix::Zero(c - d, c - d);
  for_each_noise_node(spec.nc, node_count, [&](cd alpha, double w) {
    const CMatrix dm = displacement(alpha, c).matrix;
    for (int d = 0; d < c; ++d) {
      const int len = c - d;
      noise[d].noalias() += w * dm.topLeftCorner(len, len).cwiseProduct(dm.bottomRightCorner(len, len).conjugate());
    }
  });
  transfer_.resize(c);
  for (int d = 0; d < c; ++d) transfer_[d] = noise[d] * atten[d];
}

const CMatrix& FockChannel::transfer(int d) const {
  if (d < 0 || d >= cutoff_) throw std::out_of_range("transfer offset out of range");
  return transfer_[d];
}

CMatrix FockChannel::apply(const CMatrix& op) const {
  check_square(op);
  if (op.rows() != cutoff_) throw std::invalid_argument("operator cutoff does not match the channel");
  CMatrix out = CMatrix::Zero(cutoff_, cutoff_);
  for (int d = 0; d < cutoff_; ++d) {
    const int len = cutoff_ - d;
    CVector upper(len);
    CVector lower(len);
    for (int p = 0; p < len; ++p) {
      upper(p) = op(p, p + d);
      lower(p) = op(p + d, p);
    }
    const CVector up = transfer_[d] * upper;
    const CVector lo = transfer_[d].conjugate() * lower;
    for (int j = 0; j < len; ++j) {
      out(j, j + d) = up(j);
      if (d > 0) out(j + d, j) = lo(j);
    }
  }
  return out;
}

FockDensity FockChannel::apply(const FockDensity& rho) const {
  FockDensity out{apply(rho.matrix)};
  check_channel_leak(out);
  return out;
}

CVector purified_thermal(double n, int cutoff) {
  const FockDensity rho = thermal_fock(n, cutoff);
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(cutoff) * cutoff);
  for (int m = 0; m < cutoff; ++m) psi(m * cutoff + m) = std::sqrt(rho.matrix(m, m).real());
  return psi;
}

CMatrix partial_trace(const CMatrix& joint, int cutoff, bool keep_system) {
  check_cutoff(cutoff);
  const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
  if (joint.rows() != dim || joint.cols() != dim) throw std::invalid_argument("joint operator has wrong dimension");
  CMatrix out = CMatrix::Zero(cutoff, cutoff);
  for (int a = 0; a < cutoff; ++a) {
    for (int b = 0; b < cutoff; ++b) {
      cd s = 0.0;
      for (int t = 0; t < cutoff; ++t) {
        s += keep_system ? joint(a * cutoff + t, b * cutoff + t) : joint(t * cutoff + a, t * cutoff + b);
      }
      out(a, b) = s;
    }
  }
  return out;
}

namespace {

std::vector<double> diagonal_populations(const FockDensity& rho, int cutoff) {
  check_square(rho.matrix);
  if (rho.cutoff() != cutoff) throw std::invalid_argument("input cutoff does not match the channel");
  const double off = (rho.matrix - CMatrix(rho.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  if (off > 1e-12) throw std::invalid_argument("input must be diagonal in the Fock basis");
  std::vector<double> p(cutoff);
  for (int j = 0; j < cutoff; ++j) {
    p[j] = rho.matrix(j, j).real();
    if (p[j] < -1e-14) throw std::invalid_argument("input populations must be nonnegative");
    p[j] = std::max(0.0, p[j]);
  }
  return p;
}

}  // namespace

double exchange_entropy_fock(const FockChannel& channel, const FockDensity& diagonal_input) {
  const int c = channel.cutoff();
  const auto p = diagonal_populations(diagonal_input, c);

  double out_trace = 0.0;
  const CMatrix& t0 = channel.transfer(0);
  for (int j = 0; j < c; ++j) {
    for (int n = 0; n < c; ++n) out_trace += t0(j, n).real() * p[n];
  }
  const double leak = 1.0 - out_trace;
  if (leak > kChannelLeakTolerance) {
    throw CutoffTooSmall("joint output leaks " + std::to_string(leak) + " beyond cutoff " + std::to_string(c), leak,
                         0);
  }

  // Block b collects ⟨j, n| with j − n = b (system j, reference n).
  double s_nats = 0.0;
  for (int b = -(c - 1); b <= c - 1; ++b) {
    const int n_lo = std::max(0, -b);
    const int n_hi = std::min(c - 1, c - 1 - b);
    const int len = n_hi - n_lo + 1;
    CMatrix block(len, len);
    for (int x = 0; x < len; ++x) {
      const int n = n_lo + x;
      for (int y = x; y < len; ++y) {
        const int np = n_lo + y;
        const cd v = std::sqrt(p[n] * p[np]) * channel.transfer(np - n)(n + b, n);
        block(x, y) = v;
        block(y, x) = std::conj(v);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(block, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericFailure("Hermitian eigensolver did not converge");
    for (int i = 0; i < len; ++i) {
      const double l = es.eigenvalues()(i);
      if (l > 1e-14) s_nats -= l * std::log(l);
    }
  }
  return from_nats(s_nats);
}

double exchange_entropy_fock(const ChannelSpec& spec, double n, int cutoff) {
  const FockDensity rho = thermal_fock(n, cutoff);
  const FockChannel channel(spec, cutoff);
  channel.apply(rho);  // leak check with a cutoff estimate
  return exchange_entropy_fock(channel, rho);
}

double mutual_info_fock(const FockChannel& channel, const FockDensity& diagonal_input) {
  const double h_exch = exchange_entropy_fock(channel, diagonal_input);
  return vn_entropy(diagonal_input) + vn_entropy(channel.apply(diagonal_input)) - h_exch;
}

double trace_norm_fock(double gamma, int cutoff) {
  check_cutoff(cutoff);
  if (!std::isfinite(gamma) || !(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double norm = 1.0 / (gamma + 0.5);
  const double r = std::abs((gamma - 0.5) / (gamma + 0.5));
  double sum = 0.0;
  double term = norm;
  for (int j = 0; j < cutoff; ++j) {
    sum += term;
    term *= r;
  }
  const double tail = term / (1.0 - r);
  if (tail > 1e-8) {
    const int needed = static_cast<int>(std::ceil(std::log(1e-8 * (1.0 - r) / norm) / std::log(r)));
    throw CutoffTooSmall("trace-norm series tail " + std::to_string(tail) + " at cutoff " + std::to_string(cutoff),
                         tail, needed);
  }
  return sum;
}

namespace {

// Mixes `sigma` with |0⟩ or |top⟩ so that its mean photon number becomes n.
std::vector<double> refit_mean(std::vector<double> sigma, double n) {
  const int top = static_cast<int>(sigma.size()) - 1;
  double mean = 0.0;
  for (int j = 0; j <= top; ++j) mean += j * sigma[j];
  if (std::abs(mean - n) <= 1e-15) return sigma;
  if (mean > n) {
    const double keep = n / mean;
    for (double& s : sigma) s *= keep;
    sigma[0] += 1.0 - keep;
  } else {
    if (!(top > n)) throw PerturbationRejected("perturbation support too small to reach the mean photon number");
    const double s = (n - mean) / (top - mean);
    for (double& x : sigma) x *= 1.0 - s;
    sigma[top] += s;
  }
  return sigma;
}

ProbeResult run_probe(const ChannelSpec& spec, double n, std::vector<double> sigma, double mixing, int cutoff) {
  if (!(mixing >= 0.0 && mixing <= 1.0)) throw std::invalid_argument("mixing weight must lie in [0, 1]");
  if (static_cast<int>(sigma.size()) > cutoff) throw std::invalid_argument("perturbation exceeds the cutoff");
  sigma = refit_mean(std::move(sigma), n);
  for (double s : sigma) {
    if (s < -1e-15) throw PerturbationRejected("refitted perturbation has a negative population");
  }

  const FockChannel channel(spec, cutoff);
  const FockDensity rho = thermal_fock(n, cutoff);
  FockDensity perturbed{(1.0 - mixing) * rho.matrix};
  for (std::size_t j = 0; j < sigma.size(); ++j) perturbed.matrix(j, j) += mixing * std::max(0.0, sigma[j]);

  ProbeResult res;
  res.mixing = mixing;
  res.i_gaussian = mutual_info_fock(channel, rho);
  res.i_perturbed = mixing == 0.0 ? res.i_gaussian : mutual_info_fock(channel, perturbed);
  for (int j = 0; j < cutoff; ++j) res.populations.push_back(perturbed.matrix(j, j).real());
  return res;
}

}  // namespace

ProbeResult gaussian_maximality_probe(const ChannelSpec& spec, double n, std::uint64_t seed,
                                      const ProbeOptions& options) {
  if (options.levels < 1) throw std::invalid_argument("perturbation needs at least two levels");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> sigma(options.levels + 1);
  for (double& s : sigma) s = unit(rng);
  const double total = std::accumulate(sigma.begin(), sigma.end(), 0.0);
  for (double& s : sigma) s /= total;
  const double mixing = options.mixing >= 0.0 ? options.mixing : 0.05 + 0.45 * unit(rng);
  return run_probe(spec, n, std::move(sigma), mixing, options.cutoff);
}

ProbeResult gaussian_maximality_probe(const ChannelSpec& spec, double n, const std::vector<double>& perturbation,
                                      double mixing, int cutoff) {
  if (perturbation.empty()) throw std::invalid_argument("perturbation is empty");
  double total = 0.0;
  for (double s : perturbation) {
    if (!(s >= 0.0)) throw std::invalid_argument("perturbation populations must be nonnegative");
    total += s;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("perturbation populations must sum to 1");
  return run_probe(spec, n, perturbation, mixing, cutoff);
}

}  // namespace gausscap::fock
