#include <benchmark/benchmark.h>

#include <random>

#include "gausscap/fock_oracle.hpp"
#include "gausscap/gaussian_channel.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap/symplectic.hpp"

using namespace gausscap;

namespace {

Matrix random_covariance(int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix a(2 * modes, 2 * modes);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = nd(rng);
  return a * a.transpose() + 0.5 * Matrix::Identity(2 * modes, 2 * modes);
}

void bm_symplectic_spectrum(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const CovarianceMatrix alpha(random_covariance(modes, rng));
  const auto form = SymplecticForm::canonical(modes);
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_spectrum(alpha, form));
}
BENCHMARK(bm_symplectic_spectrum)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void bm_onemode_report(benchmark::State& state) {
  double n = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(report({0.8, 0.3}, n));
    n += 1e-9;
  }
}
BENCHMARK(bm_onemode_report);

void bm_exchange_entropy_pipeline(benchmark::State& state) {
  const auto ch = make_channel({0.8, 0.3});
  const auto st = GaussianState::thermal(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(entropy_exchange(ch, st));
}
BENCHMARK(bm_exchange_entropy_pipeline);

void bm_q_theta_direct_sum(benchmark::State& state) {
  auto ch = make_channel({0.8, 0.3});
  for (int i = 1; i < state.range(0); ++i) ch = direct_sum(ch, make_channel({0.5 + 0.1 * i, 0.2}));
  for (auto _ : state) benchmark::DoNotOptimize(q_theta(ch));
}
BENCHMARK(bm_q_theta_direct_sum)->Arg(1)->Arg(8)->Arg(32);

void bm_exchange_entropy_fock(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fock::exchange_entropy_fock({0.8, 0.3}, 0.5, cutoff));
}
BENCHMARK(bm_exchange_entropy_fock)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void bm_figure(benchmark::State& state) {
  const int id = static_cast<int>(state.range(0));
  const auto grid = default_figure_grid(id);
  for (auto _ : state) benchmark::DoNotOptimize(figure_data(id, grid));
}
BENCHMARK(bm_figure)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
