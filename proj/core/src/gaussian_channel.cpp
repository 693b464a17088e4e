#include "gausscap/gaussian_channel.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gausscap/errors.hpp"
#include "gausscap/units.hpp"

namespace gausscap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scale_of(const Matrix& m) { return m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff()); }

bool near_zero(const Matrix& m, double scale) { return m.size() == 0 || m.cwiseAbs().maxCoeff() <= 1e-12 * scale; }

void require_psd(const Matrix& y, const char* what) {
  if ((y - y.transpose()).cwiseAbs().maxCoeff() > kShapeTolerance * scale_of(y)) {
    throw std::invalid_argument(std::string(what) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  if (es.eigenvalues().minCoeff() < -1e-10 * scale_of(y)) {
    throw std::invalid_argument(std::string(what) + " is not positive semidefinite");
  }
}

// Noiseless maps preserving the commutation relations are reversible.
bool is_noiseless_symplectic(const LinearBosonicMap& map) {
  const Matrix pushed = map.k * map.form_in.matrix() * map.k.transpose();
  const double scale = std::max({scale_of(pushed), scale_of(map.form_out.matrix())});
  return near_zero(map.y, scale) && near_zero(pushed - map.form_out.matrix(), scale);
}

// Union-find over phase-space indices coupled through Y or Δ''.
std::vector<std::vector<int>> coupled_blocks(const Matrix& y, const Matrix& dpp) {
  const int n = static_cast<int>(y.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double tiny = 1e-14 * std::max(scale_of(y), scale_of(dpp));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(y(i, j)) > tiny || std::abs(dpp(i, j)) > tiny) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

Matrix take(const Matrix& m, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

// B with Bᵀ Δ_can B = dpp for one coupled block; returns A = B⁻¹.
Matrix canonical_scaling(const Matrix& dpp, double hbar, double degeneracy_scale) {
  const Eigen::Index n = dpp.rows();
  if (n % 2 != 0) throw UnsupportedChannel("difference form Δ'' is degenerate (odd-dimensional block)");
  Eigen::RealSchur<Matrix> schur(dpp);
  if (schur.info() != Eigen::Success) throw NumericFailure("real Schur decomposition did not converge");
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  Matrix ideal = Matrix::Zero(n, n);
  Matrix inv_scale = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 >= n || t(i + 1, i) == 0.0) {
      throw UnsupportedChannel("difference form Δ'' is degenerate (real eigenvalue in its Schur form)");
    }
    const double mu = 0.5 * (t(i, i + 1) - t(i + 1, i));
    if (std::abs(mu) <= 1e-10 * degeneracy_scale) {
      throw UnsupportedChannel("difference form Δ'' is degenerate (|μ| = " + std::to_string(std::abs(mu)) + ")");
    }
    ideal(i, i + 1) = mu;
    ideal(i + 1, i) = -mu;
    const double s = 1.0 / std::sqrt(std::abs(mu) / hbar);
    inv_scale(i, i) = s;
    inv_scale(i + 1, i + 1) = mu > 0.0 ? s : -s;
    i += 2;
  }
  if ((q * ideal * q.transpose() - dpp).cwiseAbs().maxCoeff() > 1e-9 * scale_of(dpp)) {
    throw NumericFailure("Schur form of Δ'' is not block diagonal; the form is not normal to working precision");
  }
  return q * inv_scale;
}

}  // namespace

Matrix LinearBosonicMap::difference_form() const {
  return form_out.matrix() - k * form_in.matrix() * k.transpose();
}

LinearBosonicMap transpose_compose(const LinearBosonicMap& map) {
  return LinearBosonicMap{map.k, map.y, map.form_in.reflected(), map.form_out};
}

GaussianChannel::GaussianChannel(Matrix k, Matrix y, SymplecticForm form_in, SymplecticForm form_out)
    : map_{std::move(k), std::move(y), std::move(form_in), std::move(form_out)},
      validity_(ChannelValidity::undetermined) {
  if (map_.k.rows() != map_.form_out.dim() || map_.k.cols() != map_.form_in.dim()) {
    throw std::invalid_argument("K must be " + std::to_string(map_.form_out.dim()) + "x" +
                                std::to_string(map_.form_in.dim()));
  }
  if (map_.y.rows() != map_.form_out.dim() || map_.y.cols() != map_.form_out.dim()) {
    throw std::invalid_argument("noise form Y must match the output dimension");
  }
  require_psd(map_.y, "noise form Y");
  map_.y = 0.5 * (map_.y + map_.y.transpose()).eval();
  try {
    validity_ = is_valid_channel(map_) ? ChannelValidity::valid : ChannelValidity::invalid;
  } catch (const UnsupportedChannel&) {
    validity_ = ChannelValidity::undetermined;
  }
}

GaussianChannel GaussianChannel::identity(int modes, double hbar) {
  auto form = SymplecticForm::canonical(modes, hbar);
  return GaussianChannel(Matrix::Identity(2 * modes, 2 * modes), Matrix::Zero(2 * modes, 2 * modes), form, form);
}

double GaussianChannel::noise_factor(const Vector& z) const {
  if (z.size() != map_.y.rows()) throw std::invalid_argument("phase-space vector has wrong length");
  return std::exp(-0.5 * z.dot(map_.y * z));
}

Dilation::Dilation(Matrix k_env, Matrix env_cov, Matrix env_form)
    : k_env_(std::move(k_env)), env_cov_(std::move(env_cov)), env_form_(std::move(env_form)) {
  if (k_env_.cols() != env_cov_.rows()) throw std::invalid_argument("K_E columns must match the environment dimension");
}

Dilation::Dilation(Matrix k_env, const GaussianState& env)
    : Dilation(std::move(k_env), env.cov().matrix(), env.form().matrix()) {}

Dilation Dilation::classical(Matrix k_env, CovarianceMatrix env_cov) {
  require_psd(env_cov.matrix(), "classical environment covariance");
  const auto n = env_cov.dim();
  return Dilation(std::move(k_env), env_cov.matrix(), Matrix::Zero(n, n));
}

Dilation Dilation::combine(const Dilation& a, const Dilation& b) {
  if (a.k_env_.rows() != b.k_env_.rows()) throw std::invalid_argument("dilations act on different systems");
  Matrix k(a.k_env_.rows(), a.k_env_.cols() + b.k_env_.cols());
  k << a.k_env_, b.k_env_;
  return Dilation(std::move(k), block_diagonal(a.env_cov_, b.env_cov_), block_diagonal(a.env_form_, b.env_form_));
}

GaussianChannel from_dilation(const Matrix& k, const Dilation& dilation, const SymplecticForm& form_in,
                              const std::optional<SymplecticForm>& expected_out) {
  if (k.cols() != form_in.dim()) throw std::invalid_argument("K columns must match the input dimension");
  if (dilation.k_env().rows() != k.rows()) throw InvalidDilation("K and K_E have different output dimensions");
  const Matrix& ke = dilation.k_env();
  Matrix out = k * form_in.matrix() * k.transpose() + ke * dilation.env_form() * ke.transpose();
  Matrix y = ke * dilation.env_cov() * ke.transpose();
  y = 0.5 * (y + y.transpose()).eval();

  std::optional<SymplecticForm> form_out;
  try {
    form_out = SymplecticForm::from_matrix(out, form_in.hbar());
  } catch (const std::invalid_argument& e) {
    throw InvalidDilation(std::string("composed output commutation matrix is invalid: ") + e.what());
  }
  const auto canonical = SymplecticForm::canonical(form_out->modes(), form_in.hbar());
  if (form_out->approx_equal(canonical)) form_out = canonical;
  if (expected_out && !form_out->approx_equal(*expected_out)) {
    throw InvalidDilation("KΔKᵀ + K_E Δ_E K_Eᵀ does not reproduce the expected output form");
  }
  return GaussianChannel(k, std::move(y), form_in, *form_out);
}

GaussianChannel attenuation_amplification_channel(double k, double nc, double hbar) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("k must be a finite nonnegative number");
  if (!(nc >= 0.0) || !std::isfinite(nc)) throw std::invalid_argument("N_c must be a finite nonnegative number");
  const auto form = SymplecticForm::canonical(1, hbar);
  Matrix ke = Matrix::Identity(2, 2);
  if (k <= 1.0) {
    ke *= std::sqrt(1.0 - k * k);
  } else {
    // a' = k a + √(k²−1) a₀†: the environment momentum enters with a flipped sign.
    ke(1, 1) = -1.0;
    ke *= std::sqrt(k * k - 1.0);
  }
  Dilation env(std::move(ke), GaussianState::vacuum(1, hbar));
  if (nc > 0.0) env = Dilation::combine(env, Dilation::classical(Matrix::Identity(2, 2), CovarianceMatrix(hbar * nc * Matrix::Identity(2, 2))));
  return from_dilation(k * Matrix::Identity(2, 2), env, form, form);
}

GaussianState apply(const GaussianChannel& ch, const GaussianState& st) {
  if (!st.form().approx_equal(ch.form_in())) throw std::invalid_argument("state form does not match channel input form");
  const Matrix& k = ch.k();
  Matrix alpha = k * st.cov().matrix() * k.transpose() + ch.y();
  return GaussianState(k * st.mean(), CovarianceMatrix(0.5 * (alpha + alpha.transpose())), ch.form_out());
}

GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first) {
  if (!first.form_out().approx_equal(second.form_in())) throw std::invalid_argument("channels are not composable");
  return GaussianChannel(second.k() * first.k(), second.k() * first.y() * second.k().transpose() + second.y(),
                         first.form_in(), second.form_out());
}

GaussianChannel direct_sum(const GaussianChannel& a, const GaussianChannel& b) {
  return GaussianChannel(block_diagonal(a.k(), b.k()), block_diagonal(a.y(), b.y()),
                         direct_sum(a.form_in(), b.form_in()), direct_sum(a.form_out(), b.form_out()));
}

NoiseDecomposition noise_decomposition(const LinearBosonicMap& map) {
  NoiseDecomposition out;
  out.delta_pp = map.difference_form();
  out.delta_pp = 0.5 * (out.delta_pp - out.delta_pp.transpose()).eval();
  const Eigen::Index n = out.delta_pp.rows();
  out.scaling = Matrix::Zero(n, n);
  const double hbar = map.form_out.hbar();
  const double degeneracy_scale =
      std::max({hbar, scale_of(map.form_out.matrix()), scale_of(map.k * map.form_in.matrix() * map.k.transpose())});

  for (const auto& block : coupled_blocks(map.y, out.delta_pp)) {
    const Matrix a = canonical_scaling(take(out.delta_pp, block), hbar, degeneracy_scale);
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = 0; j < block.size(); ++j) out.scaling(block[i], block[j]) = a(i, j);
    const Matrix rho_cov = a.transpose() * take(map.y, block) * a;
    const auto canonical = SymplecticForm::canonical(static_cast<int>(block.size() / 2), hbar);
    const auto spec = symplectic_spectrum(CovarianceMatrix(0.5 * (rho_cov + rho_cov.transpose())), canonical);
    out.mode_gammas.insert(out.mode_gammas.end(), spec.gammas.begin(), spec.gammas.end());
  }
  out.boundary = std::any_of(out.mode_gammas.begin(), out.mode_gammas.end(), [](double g) { return g < 1e-12; });
  return out;
}

NoiseDecomposition noise_decomposition(const GaussianChannel& ch, bool transpose_composed) {
  return noise_decomposition(transpose_composed ? transpose_compose(ch.map()) : ch.map());
}

bool is_valid_channel(const LinearBosonicMap& map) {
  if (is_noiseless_symplectic(map)) return true;
  const auto nd = noise_decomposition(map);
  return std::all_of(nd.mode_gammas.begin(), nd.mode_gammas.end(),
                     [](double g) { return g >= 0.5 - kUncertaintyTolerance; });
}

bool is_valid_channel(const GaussianChannel& ch) { return is_valid_channel(ch.map()); }

double entropy_exchange(const GaussianChannel& ch, const GaussianState& st) {
  if (ch.validity() == ChannelValidity::invalid) throw std::invalid_argument("map is not completely positive");
  if (!st.form().approx_equal(ch.form_in())) throw std::invalid_argument("state form does not match channel input form");
  const Matrix& k = ch.k();
  const Matrix& alpha = st.cov().matrix();
  const Matrix beta = purification_block(st.cov(), st.form());
  const Matrix alpha_out = k * alpha * k.transpose() + ch.y();
  const Matrix kb = k * beta;
  const auto d_out = alpha_out.rows();
  const auto d_in = alpha.rows();
  Matrix joint(d_out + d_in, d_out + d_in);
  joint << alpha_out, kb, kb.transpose(), alpha;
  const Matrix joint_form = block_diagonal(ch.form_out().matrix(), -st.form().matrix());
  return entropy_from_spectrum(symplectic_spectrum(0.5 * (joint + joint.transpose()), joint_form));
}

double mutual_info(const GaussianChannel& ch, const GaussianState& st) {
  return entropy(st) + entropy(apply(ch, st)) - entropy_exchange(ch, st);
}

double coherent_info(const GaussianChannel& ch, const GaussianState& st) {
  return entropy(apply(ch, st)) - entropy_exchange(ch, st);
}

double q_theta(const GaussianChannel& ch) {
  const auto nd = noise_decomposition(ch, /*transpose_composed=*/true);
  double total = 0.0;
  for (double gamma : nd.mode_gammas) {
    if (gamma <= 0.0) return kInf;
    total += log_units(std::max(1.0, 1.0 / (2.0 * gamma)));
  }
  return total;
}

Matrix photon_number_energy(int modes, double hbar) {
  if (modes < 1 || !(hbar > 0.0)) throw std::invalid_argument("need modes >= 1 and hbar > 0");
  return Matrix::Identity(2 * modes, 2 * modes) / (2.0 * hbar);
}

namespace {

bool gauge_invariant_one_mode(const GaussianChannel& ch, const Matrix& energy) {
  if (ch.form_in().modes() != 1 || ch.form_out().modes() != 1) return false;
  if (!ch.form_in().is_canonical() || !ch.form_out().is_canonical()) return false;
  const Matrix& k = ch.k();
  const Matrix& y = ch.y();
  const double tol = 1e-12 * std::max({scale_of(k), scale_of(y), scale_of(energy)});
  return std::abs(k(0, 0) - k(1, 1)) <= tol && std::abs(k(0, 1) + k(1, 0)) <= tol &&
         std::abs(y(0, 0) - y(1, 1)) <= tol && std::abs(y(0, 1)) <= tol &&
         std::abs(energy(0, 0) - energy(1, 1)) <= tol && std::abs(energy(0, 1)) <= tol;
}

// Input covariance ħ S diag(ν_j) Sᵀ with S = exp(J H) symplectic, ν_j = 1/2 + t w_j,
// w = softmax(logits), and t chosen so the energy constraint is tight.
class InputParametrization {
 public:
  InputParametrization(int modes, double hbar, const Matrix& energy, double budget)
      : modes_(modes), hbar_(hbar), energy_(energy), budget_(budget),
        unit_form_(SymplecticForm::canonical(modes, 1.0).matrix()) {}

  std::size_t size() const { return static_cast<std::size_t>(2 * modes_ * (2 * modes_ + 1) / 2 + modes_); }

  std::optional<GaussianState> build(const std::vector<double>& x) const {
    const int d = 2 * modes_;
    Matrix h = Matrix::Zero(d, d);
    std::size_t p = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) h(i, j) = h(j, i) = x[p++];
    const Matrix s = (unit_form_ * h).exp();

    std::vector<double> w(static_cast<std::size_t>(modes_));
    const double top = *std::max_element(x.begin() + static_cast<long>(p), x.end());
    double wsum = 0.0;
    for (int j = 0; j < modes_; ++j) wsum += w[j] = std::exp(x[p + j] - top);
    for (double& wj : w) wj /= wsum;

    double base = 0.0;
    double slope = 0.0;
    for (int j = 0; j < modes_; ++j) {
      const auto cols = s.middleCols(2 * j, 2);
      const double c = (cols.transpose() * energy_ * cols).trace();
      base += 0.5 * hbar_ * c;
      slope += hbar_ * w[j] * c;
    }
    const double vacuum_energy = 0.5 * hbar_ * energy_.trace();
    if (!(slope > 0.0)) return std::nullopt;
    const double t = (budget_ + vacuum_energy - base) / slope;
    if (!(t >= 0.0)) return std::nullopt;

    Vector nu(d);
    for (int j = 0; j < modes_; ++j) nu(2 * j) = nu(2 * j + 1) = 0.5 + t * w[j];
    Matrix alpha = hbar_ * s * nu.asDiagonal() * s.transpose();
    try {
      return GaussianState(CovarianceMatrix(0.5 * (alpha + alpha.transpose())),
                           SymplecticForm::canonical(modes_, hbar_));
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }

 private:
  int modes_;
  double hbar_;
  Matrix energy_;
  double budget_;
  Matrix unit_form_;
};

}  // namespace

MutualInfoMaximum maximize_mutual_info_gaussian(const GaussianChannel& ch, const Matrix& energy, double budget,
                                                const MaximizerOptions& options) {
  const int modes = ch.form_in().modes();
  if (energy.rows() != ch.form_in().dim() || energy.cols() != ch.form_in().dim()) {
    throw std::invalid_argument("energy matrix must match the input dimension");
  }
  require_psd(energy, "energy matrix");
  if (!(budget > 0.0)) throw std::invalid_argument("energy budget must be positive");
  if (!ch.form_in().is_canonical()) throw std::invalid_argument("maximizer needs a canonical input form");
  if (ch.validity() == ChannelValidity::invalid) throw std::invalid_argument("map is not completely positive");
  const double hbar = ch.form_in().hbar();

  if (gauge_invariant_one_mode(ch, energy)) {
    const double n = budget / (2.0 * energy(0, 0) * hbar);
    auto input = GaussianState::thermal(n, hbar);
    const double value = mutual_info(ch, input);
    return MutualInfoMaximum{std::move(input), value, 0, true};
  }

  const InputParametrization param(modes, hbar, energy, budget);
  auto objective = [&](const std::vector<double>& x, std::optional<GaussianState>& state) {
    state = param.build(x);
    if (!state) return -std::numeric_limits<double>::infinity();
    try {
      return mutual_info(ch, *state);
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> x(param.size(), 0.0);
  std::optional<GaussianState> best_state;
  double best = objective(x, best_state);
  if (!best_state) throw NumericFailure("the energy budget cannot be met by any unsqueezed input");

  double step = options.initial_step;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const double start = best;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        auto trial = x;
        trial[i] += dir * step;
        std::optional<GaussianState> state;
        const double value = objective(trial, state);
        if (value > best + 1e-15) {
          best = value;
          x = std::move(trial);
          best_state = std::move(state);
          break;
        }
      }
    }
    if (best - start < options.min_improvement) {
      if (step <= options.min_step) return MutualInfoMaximum{*best_state, best, iter, false};
      step *= 0.5;
    }
  }
  throw MaximizationFailure("mutual information ascent did not converge in " + std::to_string(options.max_iterations) +
                                " iterations",
                            MutualInfoMaximum{*best_state, best, options.max_iterations, false});
}

}  // namespace gausscap
