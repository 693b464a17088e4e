#pragma once

#include <array>
#include <string>
#include <vector>

#include "gausscap/gaussian_channel.hpp"

namespace gausscap {

/// Attenuation (k < 1) / amplification (k > 1) channel with additive
/// classical noise of variance nc:
/// Tr T[ρ]V(z) = Tr ρV(kz) · exp[−(ħ/2)(|k²−1|/2 + N_c)|z|²].
struct OneModeParams {
  double k = 1.0;
  double nc = 0.0;
};

/// Every closed-form quantity for a thermal input with mean photon number n.
/// Entropies and capacities are in the configured log base.
struct OneModeReport {
  double k = 0.0;
  double nc = 0.0;
  double n = 0.0;
  double n_prime = 0.0;   ///< output photon number k²n + n0_prime
  double n0_prime = 0.0;  ///< output photon number for vacuum input
  double d = 0.0;         ///< √((n + n' + 1)² − 4k²n(n+1))
  std::array<double, 2> lambda_abs{};  ///< |λ₁|, |λ₂|, λ = (i/2)((n'−n) ± d)
  double h_in = 0.0;
  double h_out = 0.0;
  double h_exch = 0.0;
  double c_e = 0.0;       ///< entanglement-assisted capacity on the thermal input
  double c1_lower = 0.0;  ///< conjectured-optimal coherent-state lower bound g(n') − g(n0')
  double gain = 0.0;      ///< c_e / c1_lower; +inf when c1_lower = 0
  bool gain_infinite = false;
  double j = 0.0;         ///< coherent information h_out − h_exch
  double q_g = 0.0;       ///< sup of J over Gaussian inputs (may be negative)
  double q_theta = 0.0;   ///< transposition upper bound (+inf for the identity)
};

/// Throws std::invalid_argument for negative/non-finite parameters and
/// NumericFailure if a g-argument comes out below −1e-9.
OneModeReport report(const OneModeParams& params, double n);

/// log k² − log|k²−1| − g(nc/|k²−1|). At k = 1 the expression is 0/0 and the
/// N → ∞ limit of J is evaluated numerically instead (+inf when nc = 0).
double q_g(const OneModeParams& params);

/// max{0, log(k²+1) − log(|k²−1| + 2nc)}; +inf iff k = 1 and nc = 0.
double q_theta_closed(const OneModeParams& params);

struct EnvironmentEntropy {
  double entropy = 0.0;
  std::array<double, 2> lambda_abs{};
};

/// Entropy of the final environment of the classical-noise channel (k = 1)
/// computed from its explicit two-mode correlation matrix. nc must be > 0.
EnvironmentEntropy env_entropy_k1(double n, double nc);

/// The 4×4 matrix Δ_E⁻¹α'_E behind env_entropy_k1, exposed for checks.
Matrix environment_matrix_k1(double n, double nc, double hbar = 1.0);

struct AsymptoticGain {
  double c1_exact = 0.0;
  double ce_exact = 0.0;
  double c1_asym = 0.0;  ///< n k² log((n0'+1)/n0')
  double ce_asym = 0.0;  ///< −n log n / (n0'+1)
  double c1_ratio = 0.0;
  double ce_ratio = 0.0;
  double gain_exact = 0.0;
  double gain_asym = 0.0;
  double gain_ratio = 0.0;
};

/// Small-signal asymptotics. Needs n0' > 0 and n_small ∈ (0, 1e-3].
AsymptoticGain asymptotic_gain(const OneModeParams& params, double n_small);

/// The general-machinery channel for these parameters (built from its dilation).
GaussianChannel make_channel(const OneModeParams& params, double hbar = 1.0);

/// Plain numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Grid for figure tables. Fields left at their defaults are filled per
/// figure by default_figure_grid().
struct FigureGrid {
  double k_from = 0.05;
  double k_to = 3.0;
  int k_steps = 300;
  double nc_from = 0.0;
  double nc_to = 2.0;
  int nc_steps = 300;
  std::vector<double> n_values;  ///< curve parameters (input photon numbers)
};

/// Defaults per figure. The photon numbers {0.1, 1, 10} used for figures
/// 1–3 are a tool default; figure 4 uses n = 0.7.
FigureGrid default_figure_grid(int figure_id);

/// 1: gain vs k (nc = 0), one column per n.
/// 2: gain vs nc (k = 1), one column per n.
/// 3: output and exchange entropy vs k (nc = 0), two columns per n.
/// 4: J (per n), Q_G and Q_Θ vs k (nc = 0); k = 1/√2 is always included.
/// 5: long format over (k, nc): q_g_raw, q_g_clamped, q_theta_positive (0/1).
/// Grid coordinates are rounded to 12 significant digits before evaluation,
/// so each row can be recomputed exactly from its printed inputs.
Table figure_data(int figure_id, const FigureGrid& grid);

/// Rounds to `digits` significant decimal digits.
double round_significant(double x, int digits = 12);

/// Column label for a curve parameter, e.g. "gain_n0.7".
std::string curve_label(const std::string& prefix, double n);

/// Row-level access to figure_data for callers that evaluate rows in
/// parallel: the grid points in output order, the header, and one row.
struct FigurePoint {
  double k = 0.0;
  double nc = 0.0;
};
std::vector<FigurePoint> figure_points(int figure_id, const FigureGrid& grid);
std::vector<std::string> figure_columns(int figure_id, const FigureGrid& grid);
std::vector<double> figure_row(int figure_id, const FigureGrid& grid, const FigurePoint& point);

}  // namespace gausscap
