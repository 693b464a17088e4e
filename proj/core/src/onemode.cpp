#include "gausscap/onemode.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gausscap/errors.hpp"
#include "gausscap/units.hpp"

namespace gausscap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArgumentSlack = 1e-9;

void check_params(const OneModeParams& p) {
  if (!std::isfinite(p.k) || p.k < 0.0) throw std::invalid_argument("k must be finite and nonnegative");
  if (!std::isfinite(p.nc) || p.nc < 0.0) throw std::invalid_argument("nc must be finite and nonnegative");
}

double checked_g(double x, const char* what) {
  if (!(x >= -kArgumentSlack)) {
    throw NumericFailure(std::string("negative entropy argument for ") + what + ": " + std::to_string(x));
  }
  return g_function(std::max(0.0, x));
}

double vacuum_output_photons(const OneModeParams& p) { return std::max(0.0, p.k * p.k - 1.0) + p.nc; }

// Both exchange-entropy arguments, each computed without cancellation.
struct Exchange {
  double d;
  double x1;  // (D + N' − N − 1)/2
  double x2;  // (D − N' + N − 1)/2
};

Exchange exchange_arguments(double k2, double n0, double n) {
  const double a = 1.0 - k2;
  const double d2 = n * n * a * a + 2.0 * n * (a + n0 * (1.0 + k2)) + (n0 + 1.0) * (n0 + 1.0);
  const double d = std::sqrt(std::max(0.0, d2));
  const double delta = k2 * n + n0 - n;
  Exchange e{d, 0.0, 0.0};
  if (delta >= 0.0) {
    e.x1 = 0.5 * (d + delta - 1.0);
    e.x2 = 2.0 * n * (n0 + 1.0 - k2) / (d + 1.0 + delta);
  } else {
    e.x2 = 0.5 * (d - delta - 1.0);
    e.x1 = 2.0 * n0 * (n + 1.0) / (d + 1.0 - delta);
  }
  return e;
}

double linspace(double from, double to, int steps, int i) {
  if (i == steps - 1) return to;
  return from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void check_axis(double from, double to, int steps, const char* name) {
  if (!std::isfinite(from) || !std::isfinite(to) || from < 0.0 || !(from < to) || steps < 2) {
    throw std::invalid_argument(std::string("invalid ") + name + " grid: need 0 <= from < to and steps >= 2");
  }
}

void check_figure_id(int id) {
  if (id < 1 || id > 5) throw std::invalid_argument("unknown figure id " + std::to_string(id) + " (expected 1..5)");
}

void check_curves(const FigureGrid& grid) {
  if (grid.n_values.empty()) throw std::invalid_argument("figure needs at least one input photon number");
  for (double n : grid.n_values) {
    if (!std::isfinite(n) || n < 0.0) throw std::invalid_argument("input photon numbers must be finite and >= 0");
  }
}

}  // namespace

OneModeReport report(const OneModeParams& params, double n) {
  check_params(params);
  if (!std::isfinite(n) || n < 0.0) throw std::invalid_argument("input photon number must be finite and >= 0");

  const double k2 = params.k * params.k;
  OneModeReport r;
  r.k = params.k;
  r.nc = params.nc;
  r.n = n;
  r.n0_prime = vacuum_output_photons(params);
  r.n_prime = k2 * n + r.n0_prime;

  const Exchange e = exchange_arguments(k2, r.n0_prime, n);
  r.d = e.d;
  r.lambda_abs = {e.x1 + 0.5, e.x2 + 0.5};

  r.h_in = g_function(n);
  r.h_out = g_function(r.n_prime);
  r.h_exch = checked_g(e.x1, "lambda1") + checked_g(e.x2, "lambda2");
  r.j = r.h_out - r.h_exch;
  r.c_e = r.h_in + r.j;
  r.c1_lower = r.h_out - g_function(r.n0_prime);
  if (r.c1_lower > 0.0) {
    r.gain = r.c_e / r.c1_lower;
  } else {
    r.gain = kInf;
    r.gain_infinite = true;
  }
  r.q_g = q_g(params);
  r.q_theta = q_theta_closed(params);
  return r;
}

double q_g(const OneModeParams& params) {
  check_params(params);
  const double k2 = params.k * params.k;
  if (k2 != 1.0) {
    const double gap = std::abs(k2 - 1.0);
    return log_units(k2) - log_units(gap) - g_function(params.nc / gap);
  }
  if (params.nc == 0.0) return kInf;

  // J(N) increases to its limit; step N by decades until it settles.
  const double n0 = params.nc;
  auto coherent = [&](double n) {
    const Exchange e = exchange_arguments(1.0, n0, n);
    return g_function(n + n0) - checked_g(e.x1, "lambda1") - checked_g(e.x2, "lambda2");
  };
  double previous = coherent(1.0);
  for (int decade = 1; decade <= 15; ++decade) {
    const double current = coherent(std::pow(10.0, decade));
    if (std::abs(current - previous) < 1e-9) return current;
    previous = current;
  }
  throw NumericFailure("coherent information did not settle while evaluating the k = 1 limit");
}

double q_theta_closed(const OneModeParams& params) {
  check_params(params);
  const double k2 = params.k * params.k;
  const double denom = std::abs(k2 - 1.0) + 2.0 * params.nc;
  if (denom == 0.0) return kInf;
  return std::max(0.0, log_units(k2 + 1.0) - log_units(denom));
}

Matrix environment_matrix_k1(double n, double nc, double hbar) {
  if (!std::isfinite(n) || n < 0.0) throw std::invalid_argument("input photon number must be finite and >= 0");
  if (!std::isfinite(nc) || !(nc > 0.0)) throw std::invalid_argument("environment is trivial unless nc > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const double d2 = (nc + 1.0) * (nc + 1.0) + 4.0 * nc * n;

  Matrix delta(4, 4);
  delta << 0, 0, -1, 0,
           0, 0, 0, -1,
           1, 0, 0, 0,
           0, 1, 0, 0;
  delta *= hbar;

  Matrix alpha(4, 4);
  alpha << nc, 0, 0, nc,
           0, nc, -nc, 0,
           0, -nc, d2 / nc, 0,
           nc, 0, 0, d2 / nc;
  alpha *= 0.5 * hbar;

  return delta.inverse() * alpha;
}

EnvironmentEntropy env_entropy_k1(double n, double nc) {
  const Matrix m = environment_matrix_k1(n, nc);
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericFailure("eigensolver did not converge");
  std::vector<double> moduli;
  for (int i = 0; i < 4; ++i) moduli.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  EnvironmentEntropy out;
  out.lambda_abs = {0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3])};
  out.entropy = checked_g(out.lambda_abs[0] - 0.5, "lambda1") + checked_g(out.lambda_abs[1] - 0.5, "lambda2");
  return out;
}

AsymptoticGain asymptotic_gain(const OneModeParams& params, double n_small) {
  check_params(params);
  const double n0 = vacuum_output_photons(params);
  if (!(n0 > 0.0)) throw std::invalid_argument("asymptotics need a noisy vacuum output (N0' > 0)");
  if (!(n_small > 0.0) || n_small > 1e-3) throw std::invalid_argument("n_small must lie in (0, 1e-3]");

  const OneModeReport r = report(params, n_small);
  AsymptoticGain a;
  a.c1_exact = r.c1_lower;
  a.ce_exact = r.c_e;
  a.c1_asym = n_small * params.k * params.k * log_units((n0 + 1.0) / n0);
  a.ce_asym = -n_small * log_units(n_small) / (n0 + 1.0);
  a.c1_ratio = a.c1_exact / a.c1_asym;
  a.ce_ratio = a.ce_exact / a.ce_asym;
  a.gain_exact = r.gain;
  a.gain_asym = a.ce_asym / a.c1_asym;
  a.gain_ratio = a.gain_exact / a.gain_asym;
  return a;
}

GaussianChannel make_channel(const OneModeParams& params, double hbar) {
  check_params(params);
  return attenuation_amplification_channel(params.k, params.nc, hbar);
}

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  if (digits < 1 || digits > 17) throw std::invalid_argument("digits must be in 1..17");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

std::string curve_label(const std::string& prefix, double n) {
  std::ostringstream os;
  os.precision(12);
  os << prefix << "_n" << n;
  return os.str();
}

FigureGrid default_figure_grid(int figure_id) {
  check_figure_id(figure_id);
  FigureGrid g;
  switch (figure_id) {
    case 1:
    case 3:
      g.n_values = {0.1, 1.0, 10.0};
      break;
    case 2:
      g.nc_from = 0.0;
      g.nc_to = 3.0;
      g.nc_steps = 300;
      g.n_values = {0.1, 1.0, 10.0};
      break;
    case 4:
      g.n_values = {0.7};
      break;
    case 5:
      g.k_steps = 60;
      g.nc_from = 0.0;
      g.nc_to = 2.0;
      g.nc_steps = 41;
      break;
  }
  return g;
}

std::vector<FigurePoint> figure_points(int figure_id, const FigureGrid& grid) {
  check_figure_id(figure_id);
  std::vector<FigurePoint> pts;
  if (figure_id == 2) {
    check_axis(grid.nc_from, grid.nc_to, grid.nc_steps, "nc");
    for (int i = 0; i < grid.nc_steps; ++i) {
      pts.push_back({1.0, round_significant(linspace(grid.nc_from, grid.nc_to, grid.nc_steps, i))});
    }
    return pts;
  }
  check_axis(grid.k_from, grid.k_to, grid.k_steps, "k");
  std::vector<double> ks;
  for (int i = 0; i < grid.k_steps; ++i) ks.push_back(round_significant(linspace(grid.k_from, grid.k_to, grid.k_steps, i)));
  if (figure_id == 4) {
    const double zero = round_significant(1.0 / std::sqrt(2.0));
    if (zero >= grid.k_from && zero <= grid.k_to && std::find(ks.begin(), ks.end(), zero) == ks.end()) {
      ks.insert(std::upper_bound(ks.begin(), ks.end(), zero), zero);
    }
  }
  if (figure_id == 5) {
    check_axis(grid.nc_from, grid.nc_to, grid.nc_steps, "nc");
    for (double k : ks) {
      for (int j = 0; j < grid.nc_steps; ++j) {
        pts.push_back({k, round_significant(linspace(grid.nc_from, grid.nc_to, grid.nc_steps, j))});
      }
    }
    return pts;
  }
  for (double k : ks) pts.push_back({k, 0.0});
  return pts;
}

std::vector<std::string> figure_columns(int figure_id, const FigureGrid& grid) {
  check_figure_id(figure_id);
  std::vector<std::string> cols;
  switch (figure_id) {
    case 1:
      check_curves(grid);
      cols.push_back("k");
      for (double n : grid.n_values) cols.push_back(curve_label("gain", n));
      break;
    case 2:
      check_curves(grid);
      cols.push_back("nc");
      for (double n : grid.n_values) cols.push_back(curve_label("gain", n));
      break;
    case 3:
      check_curves(grid);
      cols.push_back("k");
      for (double n : grid.n_values) {
        cols.push_back(curve_label("h_out", n));
        cols.push_back(curve_label("h_exch", n));
      }
      break;
    case 4:
      check_curves(grid);
      cols.push_back("k");
      for (double n : grid.n_values) cols.push_back(curve_label("j", n));
      cols.push_back("q_g");
      cols.push_back("q_theta");
      break;
    case 5:
      cols = {"k", "nc", "q_g_raw", "q_g_clamped", "q_theta_positive"};
      break;
  }
  return cols;
}

std::vector<double> figure_row(int figure_id, const FigureGrid& grid, const FigurePoint& point) {
  check_figure_id(figure_id);
  const OneModeParams p{point.k, point.nc};
  std::vector<double> row;
  switch (figure_id) {
    case 1:
      row.push_back(point.k);
      for (double n : grid.n_values) row.push_back(report(p, n).gain);
      break;
    case 2:
      row.push_back(point.nc);
      for (double n : grid.n_values) row.push_back(report(p, n).gain);
      break;
    case 3:
      row.push_back(point.k);
      for (double n : grid.n_values) {
        const auto r = report(p, n);
        row.push_back(r.h_out);
        row.push_back(r.h_exch);
      }
      break;
    case 4:
      row.push_back(point.k);
      for (double n : grid.n_values) row.push_back(report(p, n).j);
      row.push_back(q_g(p));
      row.push_back(q_theta_closed(p));
      break;
    case 5: {
      const double raw = q_g(p);
      row = {point.k, point.nc, raw, std::max(0.0, raw), q_theta_closed(p) > 0.0 ? 1.0 : 0.0};
      break;
    }
  }
  return row;
}

Table figure_data(int figure_id, const FigureGrid& grid) {
  Table t;
  t.columns = figure_columns(figure_id, grid);
  for (const auto& pt : figure_points(figure_id, grid)) t.rows.push_back(figure_row(figure_id, grid, pt));
  return t;
}

}  // namespace gausscap
