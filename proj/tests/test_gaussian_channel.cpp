#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gausscap/gaussian_channel.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap/units.hpp"
#include "support/oracles.hpp"

using namespace gausscap;

namespace {

// System (s modes) interacting with a thermal environment (s modes) through a
// random symplectic map; the system part of the output defines the channel.
GaussianChannel random_channel(int s, std::mt19937_64& rng, double hbar = 1.0) {
  const Matrix big = oracle::random_symplectic(2 * s, rng, 0.5);
  const Matrix k = big.topLeftCorner(2 * s, 2 * s);
  const Matrix ke = big.topRightCorner(2 * s, 2 * s);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ns(static_cast<std::size_t>(s));
  for (double& n : ns) n = u(rng);
  const Dilation env(ke, GaussianState::thermal(ns, hbar));
  return from_dilation(k, env, SymplecticForm::canonical(s, hbar), SymplecticForm::canonical(s, hbar));
}

}  // namespace

TEST(channel, identity_is_valid_and_noiseless) {
  const auto id = GaussianChannel::identity(2);
  ASSERT_EQ(id.validity(), ChannelValidity::valid);
  ASSERT_TRUE(is_valid_channel(id));
  const auto st = GaussianState::thermal(0.8);
  const auto one = GaussianChannel::identity(1);
  ASSERT_NEAR(entropy_exchange(one, st), 0.0, 1e-10);
  ASSERT_NEAR(coherent_info(one, st), g_function(0.8), 1e-10);
  ASSERT_NEAR(mutual_info(one, st), 2.0 * g_function(0.8), 1e-10);
}

TEST(channel, shape_and_noise_checks) {
  const auto f = SymplecticForm::canonical(1);
  ASSERT_THROW(GaussianChannel(Matrix::Identity(2, 4), Matrix::Zero(2, 2), f, f), std::invalid_argument);
  ASSERT_THROW(GaussianChannel(Matrix::Identity(2, 2), Matrix::Zero(4, 4), f, f), std::invalid_argument);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  ASSERT_THROW(GaussianChannel(Matrix::Identity(2, 2), neg, f, f), std::invalid_argument);
  ASSERT_THROW(attenuation_amplification_channel(-1.0, 0.0), std::invalid_argument);
  ASSERT_THROW(attenuation_amplification_channel(1.0, -0.5), std::invalid_argument);
}

TEST(channel, too_little_noise_is_not_completely_positive) {
  const auto f = SymplecticForm::canonical(1);
  const GaussianChannel bad(0.5 * Matrix::Identity(2, 2), 0.1 * Matrix::Identity(2, 2), f, f);
  ASSERT_EQ(bad.validity(), ChannelValidity::invalid);
  ASSERT_FALSE(is_valid_channel(bad));
  ASSERT_THROW(entropy_exchange(bad, GaussianState::vacuum(1)), std::invalid_argument);
  // Exactly the quantum-limited amount is fine.
  const GaussianChannel edge(0.5 * Matrix::Identity(2, 2), 0.375 * Matrix::Identity(2, 2), f, f);
  ASSERT_EQ(edge.validity(), ChannelValidity::valid);
}

TEST(channel, degenerate_difference_form_is_undetermined) {
  // k = 1 with classical noise: Δ'' = 0.
  const auto ch = attenuation_amplification_channel(1.0, 0.5);
  ASSERT_EQ(ch.validity(), ChannelValidity::undetermined);
  ASSERT_THROW(is_valid_channel(ch), UnsupportedChannel);
  ASSERT_THROW(noise_decomposition(ch, false), UnsupportedChannel);
  // The transposed map is nondegenerate: Δ'' = 2Δ.
  ASSERT_NO_THROW(noise_decomposition(ch, true));
}

TEST(channel, one_mode_noise_parameters) {
  for (double hbar : {1.0, 2.5}) {
    for (double k : {0.0, 0.3, 0.9, 1.2, 2.0}) {
      for (double nc : {0.0, 0.7}) {
        const auto ch = attenuation_amplification_channel(k, nc, hbar);
        ASSERT_EQ(ch.validity(), ChannelValidity::valid);
        const double gap = std::abs(k * k - 1.0);
        const auto nd = noise_decomposition(ch, false);
        ASSERT_EQ(nd.mode_gammas.size(), 1u);
        ASSERT_NEAR(nd.mode_gammas[0], 0.5 + nc / gap, 1e-10);
        const auto nt = noise_decomposition(ch, true);
        ASSERT_NEAR(nt.mode_gammas[0], (gap / 2.0 + nc) / (k * k + 1.0), 1e-12);
        ASSERT_LT((ch.y() - hbar * (gap / 2.0 + nc) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(channel, noise_decomposition_dual_route_property) {
  // γ_ℓ from AᵀYA against the canonical form equal the spectrum of Y
  // relative to Δ'' directly.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int s = 1 + trial % 2;
    const auto ch = random_channel(s, rng);
    ASSERT_EQ(ch.validity(), ChannelValidity::valid);
    for (bool transposed : {false, true}) {
      const auto nd = noise_decomposition(ch, transposed);
      const Matrix& dpp = nd.delta_pp;
      // A reproduces Δ'' from the canonical form.
      const Matrix delta = SymplecticForm::canonical(s).matrix();
      const Matrix a_inv = nd.scaling.inverse();
      ASSERT_LT((a_inv.transpose() * delta * a_inv - dpp).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dpp.cwiseAbs().maxCoeff()));
      auto direct = symplectic_spectrum(ch.y(), dpp).gammas;
      auto via = nd.mode_gammas;
      std::sort(via.begin(), via.end(), std::greater<>());
      ASSERT_EQ(direct.size(), via.size());
      for (std::size_t j = 0; j < via.size(); ++j) ASSERT_NEAR(direct[j], via[j], 1e-8 * std::max(1.0, via[j]));
      if (!transposed) {
        for (double g : via) ASSERT_GE(g, 0.5 - 1e-9);
      }
    }
  }
}

TEST(channel, transpose_compose_is_an_involution) {
  std::mt19937_64 rng(4);
  const auto ch = random_channel(2, rng);
  const auto twice = transpose_compose(transpose_compose(ch.map()));
  ASSERT_LT((twice.difference_form() - ch.map().difference_form()).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_TRUE(twice.k == ch.k());
}

TEST(channel, apply_moves_photon_number) {
  for (double k : {0.4, 1.0, 1.7}) {
    const double nc = 0.3;
    const double n = 1.1;
    const auto out = apply(attenuation_amplification_channel(k, nc), GaussianState::thermal(n));
    const double expected = k * k * n + std::max(0.0, k * k - 1.0) + nc;
    ASSERT_NEAR(out.cov().matrix()(0, 0), expected + 0.5, 1e-12);
    ASSERT_NEAR(out.cov().matrix()(0, 1), 0.0, 1e-12);
  }
  const GaussianState shifted(Vector::Constant(2, 2.0), GaussianState::vacuum(1).cov(), SymplecticForm::canonical(1));
  ASSERT_NEAR(apply(attenuation_amplification_channel(0.5, 0.0), shifted).mean()(0), 1.0, 1e-15);
}

TEST(channel, composition_of_attenuators) {
  const auto a = attenuation_amplification_channel(0.8, 0.0);
  const auto b = attenuation_amplification_channel(0.5, 0.0);
  const auto c = compose(b, a);
  const auto direct = attenuation_amplification_channel(0.4, 0.0);
  ASSERT_LT((c.k() - direct.k()).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_LT((c.y() - direct.y()).cwiseAbs().maxCoeff(), 1e-15);
  ASSERT_EQ(c.validity(), ChannelValidity::valid);
  // With k₁k₂ = 1 the difference form vanishes, so validity cannot be decided.
  const auto amp = attenuation_amplification_channel(2.0, 0.0);
  const auto loop = compose(amp, b);
  ASSERT_EQ(loop.validity(), ChannelValidity::undetermined);
}

TEST(channel, dilation_errors) {
  const auto f = SymplecticForm::canonical(1);
  // Wrong environment coupling: KΔKᵀ + K_EΔ_EK_Eᵀ ≠ Δ.
  const Dilation env(Matrix::Identity(2, 2), GaussianState::vacuum(1));
  ASSERT_THROW(from_dilation(Matrix::Identity(2, 2), env, f, f), InvalidDilation);
  // Classical environments leave the form alone.
  const auto cls = Dilation::classical(Matrix::Identity(2, 2), CovarianceMatrix(Matrix::Identity(2, 2)));
  ASSERT_NO_THROW(from_dilation(Matrix::Identity(2, 2), cls, f, f));
  ASSERT_THROW(Dilation::combine(cls, Dilation::classical(Matrix::Identity(4, 4), CovarianceMatrix(Matrix::Identity(4, 4)))),
               std::invalid_argument);
}

TEST(channel, general_pipeline_matches_closed_form) {
  for (double k : {0.0, 0.25, 0.8, 1.0, 1.5}) {
    for (double nc : {0.0, 0.6}) {
      for (double n : {0.0, 0.3, 4.0}) {
        if (k == 1.0 && nc == 0.0) continue;
        const auto ch = attenuation_amplification_channel(k, nc);
        const auto st = GaussianState::thermal(n);
        const auto r = report({k, nc}, n);
        ASSERT_NEAR(entropy_exchange(ch, st), r.h_exch, 1e-9);
        ASSERT_NEAR(entropy(apply(ch, st)), r.h_out, 1e-9);
        ASSERT_NEAR(mutual_info(ch, st), r.c_e, 1e-9);
        ASSERT_NEAR(coherent_info(ch, st), r.j, 1e-9);
      }
    }
  }
}

TEST(channel, information_identities_property) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const int s = 1 + trial % 2;
    const auto ch = random_channel(s, rng);
    const GaussianState st(CovarianceMatrix(oracle::random_covariance(s, rng)), SymplecticForm::canonical(s));
    const double i = mutual_info(ch, st);
    const double j = coherent_info(ch, st);
    ASSERT_NEAR(i - j, entropy(st), 1e-9);
    ASSERT_GE(i, -1e-9);
    ASSERT_LE(i, 2.0 * entropy(st) + 1e-8);
  }
}

TEST(channel, entropy_exchange_is_environment_entropy_at_k1) {
  for (double n : {0.0, 1.0, 2.0}) {
    const auto ch = attenuation_amplification_channel(1.0, 0.5);
    ASSERT_NEAR(entropy_exchange(ch, GaussianState::thermal(n)), env_entropy_k1(n, 0.5).entropy, 1e-9);
  }
}

TEST(q_theta, identity_is_infinite_and_noisy_channels_vanish) {
  ASSERT_TRUE(std::isinf(q_theta(GaussianChannel::identity(1))));
  ASSERT_NEAR(q_theta(attenuation_amplification_channel(1.0, 1.0)), 0.0, 1e-12);
  ASSERT_NEAR(q_theta(attenuation_amplification_channel(1.0 / std::sqrt(2.0), 0.0)), std::log2(3.0), 1e-12);
}

TEST(q_theta, additive_over_direct_sums) {
  const double ks[] = {0.3, 0.7, 1.0, 1.4};
  const double ncs[] = {0.0, 0.2, 0.9};
  for (double k1 : ks)
    for (double n1 : ncs)
      for (double k2 : ks)
        for (double n2 : ncs) {
          const auto a = attenuation_amplification_channel(k1, n1);
          const auto b = attenuation_amplification_channel(k2, n2);
          const double sum = q_theta(a) + q_theta(b);
          ASSERT_EQ(q_theta(direct_sum(a, b)), sum) << k1 << " " << n1 << " " << k2 << " " << n2;
        }
}

TEST(q_theta, follows_log_base) {
  const auto ch = attenuation_amplification_channel(0.5, 0.1);
  const double bits = q_theta(ch);
  const ScopedLogBase nats(LogBase::nats);
  ASSERT_NEAR(q_theta(ch), bits * std::log(2.0), 1e-14);
}

TEST(energy, photon_number_form) {
  const Matrix e = photon_number_energy(2, 2.0);
  const auto th = GaussianState::thermal(std::vector<double>{0.5, 1.5}, 2.0);
  ASSERT_NEAR((e * th.cov().matrix()).trace(), 0.5 + 1.5 + 1.0, 1e-14);
  ASSERT_THROW(photon_number_energy(0), std::invalid_argument);
}

TEST(maximizer, one_mode_uses_thermal_input) {
  const auto ch = attenuation_amplification_channel(0.8, 0.2);
  const auto best = maximize_mutual_info_gaussian(ch, photon_number_energy(1), 1.5);
  ASSERT_TRUE(best.closed_form);
  ASSERT_NEAR(best.mutual_info, report({0.8, 0.2}, 1.5).c_e, 1e-10);
  ASSERT_NEAR(best.input.cov().matrix()(0, 0), 2.0, 1e-12);
}

TEST(maximizer, two_identical_modes_split_the_budget) {
  const auto one = attenuation_amplification_channel(0.7, 0.1);
  const auto ch = direct_sum(one, one);
  const double budget = 1.2;
  const auto best = maximize_mutual_info_gaussian(ch, photon_number_energy(2), budget);
  ASSERT_FALSE(best.closed_form);
  const double even = 2.0 * report({0.7, 0.1}, 0.6).c_e;
  ASSERT_NEAR(best.mutual_info, even, 1e-6);
  // The returned input saturates the budget.
  const double energy = (photon_number_energy(2) * best.input.cov().matrix()).trace() - 1.0;
  ASSERT_NEAR(energy, budget, 1e-9);
}

TEST(maximizer, beats_any_fixed_thermal_split) {
  const auto ch = direct_sum(attenuation_amplification_channel(0.9, 0.0), attenuation_amplification_channel(0.4, 0.3));
  const double budget = 2.0;
  const auto best = maximize_mutual_info_gaussian(ch, photon_number_energy(2), budget);
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double split = report({0.9, 0.0}, frac * budget).c_e + report({0.4, 0.3}, (1.0 - frac) * budget).c_e;
    ASSERT_GE(best.mutual_info, split - 1e-7) << "fraction " << frac;
  }
}

TEST(maximizer, argument_checks) {
  const auto ch = attenuation_amplification_channel(0.5, 0.0);
  ASSERT_THROW(maximize_mutual_info_gaussian(ch, photon_number_energy(1), 0.0), std::invalid_argument);
  ASSERT_THROW(maximize_mutual_info_gaussian(ch, photon_number_energy(2), 1.0), std::invalid_argument);
}
