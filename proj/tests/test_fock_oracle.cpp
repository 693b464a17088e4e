#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

#include "gausscap/errors.hpp"
#include "gausscap/fock_oracle.hpp"
#include "gausscap/gaussian_state.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap/units.hpp"
#include "support/oracles.hpp"

using namespace gausscap;
using namespace gausscap::fock;

namespace {

double mean_photons(const CMatrix& rho) {
  double m = 0.0;
  for (int j = 0; j < rho.rows(); ++j) m += j * rho(j, j).real();
  return m;
}

FockDensity pure_state(const CVector& psi) { return {psi * psi.adjoint()}; }

}  // namespace

TEST(thermal_fock, entropy_and_leak) {
  const auto rho = thermal_fock(1.0, 60);
  ASSERT_LT(rho.leak(), 1e-17);
  ASSERT_NEAR(vn_entropy(rho), 2.0, 1e-12);
  ASSERT_NEAR(mean_photons(rho.matrix), 1.0, 1e-12);
  ASSERT_NEAR(vn_entropy(thermal_fock(0.3, 60)), g_function(0.3), 1e-12);
}

TEST(thermal_fock, small_cutoff_reports_leak) {
  try {
    thermal_fock(1.0, 5);
    FAIL() << "expected CutoffTooSmall";
  } catch (const CutoffTooSmall& e) {
    ASSERT_NEAR(e.leak(), std::pow(0.5, 5), 1e-15);
    ASSERT_GE(e.required_cutoff(), 27);
    ASSERT_NO_THROW(thermal_fock(1.0, e.required_cutoff()));
  }
  ASSERT_THROW(thermal_fock(-1.0, 10), std::invalid_argument);
}

TEST(vn_entropy, examples) {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  ASSERT_NEAR(vn_entropy(pure_state(psi)), 0.0, 1e-13);
  CMatrix mixed = CMatrix::Identity(4, 4) / 4.0;
  ASSERT_NEAR(vn_entropy(mixed), 2.0, 1e-14);
  const ScopedLogBase nats(LogBase::nats);
  ASSERT_NEAR(vn_entropy(mixed), std::log(4.0), 1e-14);
}

TEST(attenuation, identity_and_full_loss) {
  const auto rho = thermal_fock(0.8, 50);
  const auto same = attenuate_fock(rho, 1.0);
  ASSERT_LT((same.matrix - rho.matrix).cwiseAbs().maxCoeff(), 1e-15);
  const auto gone = attenuate_fock(rho, 0.0);
  ASSERT_NEAR(gone.matrix(0, 0).real(), rho.matrix.trace().real(), 1e-15);
  ASSERT_NEAR(gone.matrix.cwiseAbs().sum(), gone.matrix(0, 0).real(), 1e-15);
}

TEST(attenuation, thermal_output) {
  const auto out = attenuate_fock(thermal_fock(1.0, 60), 0.8);
  ASSERT_NEAR(mean_photons(out.matrix), 0.64, 1e-12);
  ASSERT_NEAR(vn_entropy(out), g_function(0.64), 1e-10);
}

TEST(attenuation, kraus_and_unitary_routes_agree) {
  CVector psi(12);
  for (int j = 0; j < 12; ++j) psi(j) = std::polar(std::exp(-0.3 * j), 0.7 * j);
  psi.normalize();
  for (double k : {0.0, 0.3, 0.8, 1.0}) {
    const auto a = attenuate_fock(pure_state(psi), k, AttenuationRoute::kraus);
    const auto b = attenuate_fock(pure_state(psi), k, AttenuationRoute::unitary);
    ASSERT_LT((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-10) << "k = " << k;
  }
  ASSERT_THROW(attenuate_fock(thermal_fock(1.0, 40), 1.2), std::invalid_argument);
}

TEST(gauss_hermite, integrates_polynomials_exactly) {
  const auto gh = gauss_hermite(10);
  ASSERT_EQ(gh.nodes.size(), 10u);
  double w = 0.0, t2 = 0.0, t4 = 0.0, t18 = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double t = gh.nodes[i];
    w += gh.weights[i];
    t2 += gh.weights[i] * t * t;
    t4 += gh.weights[i] * std::pow(t, 4);
    t18 += gh.weights[i] * std::pow(t, 18);
  }
  const double sp = std::sqrt(M_PI);
  ASSERT_NEAR(w, sp, 1e-13);
  ASSERT_NEAR(t2, sp / 2.0, 1e-13);
  ASSERT_NEAR(t4, 3.0 * sp / 4.0, 1e-13);
  // (2·9 − 1)!! / 2⁹ √π
  ASSERT_NEAR(t18 / (34459425.0 / 512.0 * sp), 1.0, 1e-11);
  for (std::size_t i = 1; i < gh.nodes.size(); ++i) ASSERT_LT(gh.nodes[i - 1], gh.nodes[i]);
}

TEST(displacement, matches_exponential_of_generator) {
  const std::complex<double> alpha(0.6, -0.4);
  const int big = 80;
  const CMatrix a = annihilation(big).matrix;
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const CMatrix ref = gen.exp();
  const CMatrix d = displacement(alpha, 20).matrix;
  ASSERT_LT((d - ref.topLeftCorner(20, 20)).cwiseAbs().maxCoeff(), 1e-12);
  // Coherent state populations.
  const double m = std::norm(alpha);
  ASSERT_NEAR(std::norm(d(0, 0)), std::exp(-m), 1e-14);
  ASSERT_NEAR(std::norm(d(3, 0)), std::exp(-m) * m * m * m / 6.0, 1e-14);
}

TEST(classical_noise, vacuum_and_thermal) {
  const auto out0 = classical_noise_fock(thermal_fock(0.0, 60), 0.5);
  ASSERT_NEAR(mean_photons(out0.matrix), 0.5, 1e-9);
  ASSERT_NEAR(vn_entropy(out0), g_function(0.5), 1e-8);
  const auto out1 = classical_noise_fock(thermal_fock(1.0, 60), 1.0);
  ASSERT_NEAR(vn_entropy(out1), g_function(2.0), 1e-7);
  ASSERT_THROW(classical_noise_fock(thermal_fock(1.0, 30), 3.0), CutoffTooSmall);
}

TEST(fock_channel, transfer_matches_composed_operations) {
  CVector psi(15);
  for (int j = 0; j < 15; ++j) psi(j) = std::polar(std::pow(0.6, j), 0.4 * j * j);
  psi.normalize();
  CVector full = CVector::Zero(40);
  full.head(15) = psi;
  const CMatrix rho = full * full.adjoint();
  const FockChannel ch({0.7, 0.3}, 40);
  const CMatrix direct = classical_noise_operator(attenuate_operator(rho, 0.7), 0.3);
  ASSERT_LT((ch.apply(rho) - direct).cwiseAbs().maxCoeff(), 1e-12);
  ASSERT_EQ(ch.transfer(3).rows(), 37);
  ASSERT_THROW(ch.transfer(40), std::out_of_range);
}

TEST(fock_channel, preserves_trace_within_leak) {
  const FockChannel ch({0.8, 0.5}, 50);
  for (double n : {0.1, 1.0, 2.0}) {
    const auto rho = thermal_fock(n, 50);
    const auto out = ch.apply(rho);
    ASSERT_GE(out.leak(), -1e-12);
    ASSERT_LT(out.leak(), kChannelLeakTolerance);
    ASSERT_NEAR(mean_photons(out.matrix), 0.64 * n + 0.5, 1e-5);
  }
  ASSERT_THROW(FockChannel({1.5, 0.0}, 20), std::invalid_argument);
}

TEST(exchange_entropy, examples) {
  ASSERT_NEAR(exchange_entropy_fock({0.8, 0.0}, 1.0, 60), g_function(0.36), 1e-9);
  ASSERT_NEAR(exchange_entropy_fock({1.0, 0.0}, 1.0, 60), 0.0, 1e-10);
  ASSERT_NEAR(exchange_entropy_fock({1.0, 0.5}, 0.5, 60), env_entropy_k1(0.5, 0.5).entropy, 1e-7);
  ASSERT_NEAR(exchange_entropy_fock({0.5, 0.5}, 0.2, 60), report({0.5, 0.5}, 0.2).h_exch, 1e-7);
}

TEST(exchange_entropy, block_method_matches_dense_joint_state) {
  const int c = 10;
  const double n = 0.15;
  const FockChannel ch({0.6, 0.1}, c);
  const CVector psi = purified_thermal(n, c);
  const CMatrix joint = psi * psi.adjoint();
  // Apply the channel to the system factor, block by block over reference indices.
  CMatrix out = CMatrix::Zero(c * c, c * c);
  for (int r = 0; r < c; ++r)
    for (int s = 0; s < c; ++s) {
      CMatrix block(c, c);
      for (int m = 0; m < c; ++m)
        for (int l = 0; l < c; ++l) block(m, l) = joint(m * c + r, l * c + s);
      const CMatrix mapped = ch.apply(block);
      for (int m = 0; m < c; ++m)
        for (int l = 0; l < c; ++l) out(m * c + r, l * c + s) = mapped(m, l);
    }
  const double dense = vn_entropy(out);
  ASSERT_NEAR(exchange_entropy_fock(ch, thermal_fock(n, c)), dense, 1e-12);
}

TEST(exchange_entropy, agrees_with_closed_form_on_grid) {
  for (double k : {0.2, 0.6, 0.9, 1.0})
    for (double nc : {0.0, 0.3})
      for (double n : {0.1, 0.8}) {
        if (k == 1.0 && nc == 0.0) continue;
        const double closed = report({k, nc}, n).h_exch;
        ASSERT_NEAR(exchange_entropy_fock({k, nc}, n, 60), closed, 1e-6) << k << " " << nc << " " << n;
      }
}

TEST(exchange_entropy, rejects_off_diagonal_inputs) {
  const FockChannel ch({0.5, 0.0}, 10);
  CMatrix rho = thermal_fock(0.1, 10).matrix;
  rho(0, 1) = rho(1, 0) = 0.01;
  ASSERT_THROW(exchange_entropy_fock(ch, FockDensity{rho}), std::invalid_argument);
}

TEST(mutual_info, matches_closed_form) {
  const auto r = report({0.8, 0.2}, 0.5);
  const FockChannel ch({0.8, 0.2}, 60);
  ASSERT_NEAR(mutual_info_fock(ch, thermal_fock(0.5, 60)), r.c_e, 1e-6);
}

TEST(purification, marginals) {
  const int c = 40;
  const CVector psi = purified_thermal(0.7, c);
  ASSERT_NEAR(psi.squaredNorm(), 1.0, 1e-8);
  const CMatrix joint = psi * psi.adjoint();
  const CMatrix sys = partial_trace(joint, c, true);
  const CMatrix ref = partial_trace(joint, c, false);
  ASSERT_LT((sys - thermal_fock(0.7, c).matrix).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_LT((ref - sys).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_NEAR(vn_entropy(joint), 0.0, 1e-9);
}

TEST(trace_norm, examples) {
  ASSERT_NEAR(trace_norm_fock(0.25, 60), thermal_trace_norm(0.25), 1e-9);
  ASSERT_NEAR(trace_norm_fock(0.3, 60), thermal_trace_norm(0.3), 1e-9);
  ASSERT_NEAR(trace_norm_fock(0.5, 5), 1.0, 1e-15);
  ASSERT_NEAR(trace_norm_fock(2.0, 120), 1.0, 1e-8);
  ASSERT_THROW(trace_norm_fock(0.05, 10), CutoffTooSmall);
}

TEST(trace_norm, alternating_series_law) {
  for (double gamma : {0.1, 0.2, 0.45}) {
    const double r = std::abs((gamma - 0.5) / (gamma + 0.5));
    const int cutoff = static_cast<int>(std::ceil(std::log(1e-12) / std::log(r)));
    ASSERT_NEAR(trace_norm_fock(gamma, cutoff), 1.0 / (2.0 * gamma), 1e-8) << gamma;
  }
}

TEST(maximality_probe, zero_mixing_is_equality) {
  ProbeOptions opt;
  opt.mixing = 0.0;
  const auto r = gaussian_maximality_probe({0.8, 0.0}, 1.0, 7u, opt);
  ASSERT_EQ(r.i_perturbed, r.i_gaussian);
  ASSERT_NEAR(r.i_gaussian, report({0.8, 0.0}, 1.0).c_e, 1e-6);
}

TEST(maximality_probe, explicit_perturbation_lowers_mutual_info) {
  const auto r = gaussian_maximality_probe({0.8, 0.0}, 1.0, {0.5, 0.0, 0.5}, 0.5);
  ASSERT_LT(r.i_perturbed, r.i_gaussian);
  ASSERT_NEAR(mean_photons(CMatrix(Eigen::Map<const Eigen::VectorXd>(r.populations.data(), r.populations.size())
                                       .cast<std::complex<double>>()
                                       .asDiagonal())),
              1.0, 1e-6);
}

TEST(maximality_probe, random_perturbations_never_win) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (ChannelSpec spec : {ChannelSpec{0.8, 0.0}, ChannelSpec{0.6, 0.3}}) {
      const auto r = gaussian_maximality_probe(spec, 0.5, seed);
      ASSERT_GE(r.mixing, 0.05);
      ASSERT_LE(r.mixing, 0.5);
      ASSERT_LE(r.i_perturbed, r.i_gaussian + 1e-9) << "seed " << seed;
      double mean = 0.0;
      for (std::size_t j = 0; j < r.populations.size(); ++j) mean += j * r.populations[j];
      ASSERT_NEAR(mean, 0.5, 1e-6);
    }
}

TEST(maximality_probe, rejections) {
  ProbeOptions opt;
  opt.levels = 1;
  ASSERT_THROW(gaussian_maximality_probe({0.8, 0.0}, 1.5, 3u, opt), PerturbationRejected);
  ASSERT_THROW(gaussian_maximality_probe({0.8, 0.0}, 1.0, {0.5, 0.4}, 0.5), std::invalid_argument);
  ASSERT_THROW(gaussian_maximality_probe({0.8, 0.0}, 1.0, {1.0}, 1.5), std::invalid_argument);
}
