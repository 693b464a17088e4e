// Acceptance run: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is nonzero when any criterion fails.

#include <fmt/core.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gausscap/fock_oracle.hpp"
#include "gausscap/gaussian_channel.hpp"
#include "gausscap/gaussian_state.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap_cli/app.hpp"

using namespace gausscap;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    details.push_back((ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

int failures = 0;

void report_line(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.passed = false;
    o.details.push_back(std::string("FAIL exception: ") + e.what());
  }
  if (!o.passed) ++failures;
  fmt::print("{} {} {}\n", o.passed ? "PASS" : "FAIL", id, title);
  for (const auto& d : o.details) fmt::print("       {}\n", d);
  std::fflush(stdout);
}

std::vector<double> linspace(double from, double to, int steps) {
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) v.push_back(from + (to - from) * i / (steps - 1));
  return v;
}

std::string num(double x) { return fmt::format("{:.6g}", x); }

double parse_cell(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

// --- criteria ---------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  double worst = 0.0;
  for (double n : {0.1, 0.7, 1.0, 5.0}) worst = std::max(worst, std::abs(report({1.0 / std::sqrt(2.0), 0.0}, n).j));
  o.require(worst < 1e-9, "max |J(k=1/sqrt2, nc=0, N)| over N in {0.1, 0.7, 1, 5} = " + num(worst) + " < 1e-9");
  return o;
}

Outcome ac2() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double n = 0.5 * i;
    const auto r = report({1.0, 0.0}, n);
    const double g = g_function(n);
    worst = std::max({worst, std::abs(r.h_exch), std::abs(r.j - g), std::abs(r.c_e - 2.0 * g)});
  }
  o.require(worst <= 1e-12, "max deviation of H(rho,T)=0, J=g(N), C_e=2g(N) over N = 0, 0.5, ..., 4.5: " + num(worst));
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto ks = linspace(0.05, 3.0, 50);
  const auto ncs = linspace(0.0, 3.0, 50);
  int literal_mismatch = 0, sufficient_violations = 0, exact_mismatch = 0;
  double worst_pipeline = 0.0;
  std::string example;
  for (double k : ks)
    for (double nc : ncs) {
      const double q = q_theta_closed({k, nc});
      const bool zero = q == 0.0;
      if (zero != (nc >= std::max(1.0, k * k))) {
        if (literal_mismatch++ == 0) example = "k=" + num(k) + ", nc=" + num(nc) + ", q_theta=" + num(q);
      }
      if (nc >= std::max(1.0, k * k) && !zero) ++sufficient_violations;
      if (zero != (nc >= std::min(1.0, k * k))) ++exact_mismatch;
      const double p = q_theta(make_channel({k, nc}));
      const double diff = std::isinf(q) && std::isinf(p) ? 0.0 : std::abs(p - q);
      worst_pipeline = std::max(worst_pipeline, std::isnan(diff) ? std::numeric_limits<double>::infinity() : diff);
    }
  o.require(literal_mismatch == 0,
            "3a literal: q_theta_closed = 0 iff nc >= max{1, k^2}: " + std::to_string(literal_mismatch) +
                " of 2500 grid points disagree" + (example.empty() ? "" : " (e.g. " + example + ")"));
  o.require(sufficient_violations == 0,
            "3b nc >= max{1, k^2} implies q_theta_closed = 0: " + std::to_string(sufficient_violations) + " violations");
  o.require(exact_mismatch == 0,
            "3b the zero set is exactly nc >= min{1, k^2}: " + std::to_string(exact_mismatch) + " mismatches");
  o.require(worst_pipeline <= 1e-12, "3c closed form vs general q_theta pipeline, max |diff| = " + num(worst_pipeline));
  return o;
}

Outcome ac4() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      const double n = 2.0 * i / 9.0;
      const double nc = 0.2 * j;
      worst = std::max(worst, std::abs(env_entropy_k1(n, nc).entropy - report({1.0, nc}, n).h_exch));
    }
  o.note("grid: N = 2i/9, i = 0..9; nc = 0.2j, j = 1..10 (nc = 0 is the identity channel)");
  o.require(worst < 1e-9, "max |env_entropy_k1 - H_exch(k=1)| = " + num(worst));
  return o;
}

Outcome ac5() {
  Outcome o;
  double worst_out = 0.0, worst_exch = 0.0;
  for (double k : {0.5, 0.8})
    for (double nc : {0.0, 0.5}) {
      const fock::FockChannel ch({k, nc}, 60);
      for (double n : {0.2, 1.0}) {
        const auto rho = fock::thermal_fock(n, 60);
        const auto r = report({k, nc}, n);
        worst_out = std::max(worst_out, std::abs(fock::vn_entropy(ch.apply(rho)) - g_function(r.n_prime)));
        worst_exch = std::max(worst_exch, std::abs(fock::exchange_entropy_fock(ch, rho) - r.h_exch));
      }
    }
  o.require(worst_out < 1e-4, "max |H_out(oracle) - g(N')| = " + num(worst_out));
  o.require(worst_exch < 1e-3, "max |H_exch(oracle) - closed form| = " + num(worst_exch));
  return o;
}

Outcome ac6() {
  Outcome o;
  double worst = 0.0;
  for (double gamma : {0.1, 0.25, 0.4, 0.5, 1.0, 3.0})
    worst = std::max(worst, std::abs(fock::trace_norm_fock(gamma, 200) - std::max(1.0, 1.0 / (2.0 * gamma))));
  o.require(worst < 1e-5, "max |trace_norm_fock(gamma, 200) - max{1, 1/(2 gamma)}| = " + num(worst));
  return o;
}

Outcome ac7() {
  Outcome o;
  const OneModeParams p{std::sqrt(2.0), 0.0};
  const double qg = q_g(p);
  const double j = report(p, 1e6).j;
  o.require(std::abs(qg - 1.0) < 1e-12, "Q_G(k=sqrt2, nc=0) = " + num(qg));
  o.require(std::abs(j - qg) < 1e-3, "J(N=1e6) = " + num(j) + ", |J - Q_G| = " + num(std::abs(j - qg)));
  int drops = 0;
  double previous = report(p, 0.0).j;
  for (int e = -16; e <= 24; ++e) {
    const double jn = report(p, std::pow(10.0, 0.25 * e)).j;
    if (!(jn > previous)) ++drops;
    previous = jn;
  }
  o.require(drops == 0, "J strictly increasing on N = 0, 1e-4, ..., 1e6 (quarter decades): " + std::to_string(drops) +
                            " violations");
  return o;
}

Outcome ac8() {
  Outcome o;
  for (const fock::ChannelSpec spec : {fock::ChannelSpec{0.8, 0.0}, fock::ChannelSpec{0.6, 0.3}}) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto r = fock::gaussian_maximality_probe(spec, 0.8, seed);
      worst = std::max(worst, r.i_perturbed - r.i_gaussian);
    }
    o.require(worst <= 1e-6, fmt::format("k={}, nc={}, N=0.8, 20 seeds: max(i_perturbed - i_gaussian) = {}", spec.k,
                                         spec.nc, num(worst)));
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  const OneModeParams p{1.0, 0.5};
  const auto a6 = asymptotic_gain(p, 1e-6);
  const auto a8 = asymptotic_gain(p, 1e-8);
  o.require(std::abs(a6.c1_ratio - 1.0) <= 0.05, "C1_lower exact/asymptotic at N=1e-6 = " + num(a6.c1_ratio));
  o.require(std::abs(a6.ce_ratio - 1.0) <= 0.05, "C_e exact/asymptotic at N=1e-6 = " + num(a6.ce_ratio));
  o.require(a8.gain_exact > a6.gain_exact,
            "gain(N=1e-8) = " + num(a8.gain_exact) + " > gain(N=1e-6) = " + num(a6.gain_exact));
  o.note("C_e ratio at N=1e-8: " + num(a8.ce_ratio) + ", N=1e-10: " + num(asymptotic_gain(p, 1e-10).ce_ratio));
  return o;
}

Outcome ac10() {
  Outcome o;
  int unequal = 0, total = 0;
  const double ks[] = {0.3, 0.7071067811865476, 1.0, 1.6};
  const double ncs[] = {0.0, 0.2, 1.5};
  for (double k1 : ks)
    for (double n1 : ncs)
      for (double k2 : ks)
        for (double n2 : ncs) {
          const auto a = make_channel({k1, n1});
          const auto b = make_channel({k2, n2});
          ++total;
          if (!(q_theta(direct_sum(a, b)) == q_theta(a) + q_theta(b))) ++unequal;
        }
  o.require(unequal == 0, "q_theta(A + B) == q_theta(A) + q_theta(B) exactly: " + std::to_string(unequal) + " of " +
                              std::to_string(total) + " pairs differ");
  return o;
}

Outcome ac11() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "gausscap_acceptance";
  std::filesystem::create_directories(dir);
  for (int id = 1; id <= 5; ++id) {
    const auto path = (dir / fmt::format("figure{}.csv", id)).string();
    const std::string ids = std::to_string(id);
    const char* argv[] = {"gausscap", "figure", "--id", ids.c_str(), "--out", path.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(6, argv, out, err);
    o.require(code == 0 && std::filesystem::file_size(path) > 0,
              "figure --id " + ids + " exit " + std::to_string(code) + (err.str().empty() ? "" : ": " + err.str()));
  }

  std::ifstream in(dir / "figure4.csv");
  std::string line;
  std::vector<std::string> header;
  int rows = 0, j_violations = 0, qg_violations = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (header.empty()) {
      header = cells;
      continue;
    }
    ++rows;
    const double j = parse_cell(cells[1]), qg = parse_cell(cells[2]), qt = parse_cell(cells[3]);
    if (std::isfinite(j) && std::isfinite(qt) && qt < j) ++j_violations;
    if (qg >= 0.0 && qt < qg) ++qg_violations;
  }
  o.require(header == std::vector<std::string>{"k", "j_n0.7", "q_g", "q_theta"}, "figure 4 columns k, j_n0.7, q_g, q_theta");
  o.require(rows > 0 && j_violations == 0,
            "figure 4: Q_Theta >= J(N=0.7) where both finite: " + std::to_string(j_violations) + " of " +
                std::to_string(rows) + " rows violate");
  o.require(qg_violations == 0, "figure 4: Q_Theta >= Q_G where Q_G >= 0: " + std::to_string(qg_violations) + " rows violate");
  return o;
}

}  // namespace

int main() {
  report_line("AC1", "zero crossing of J at k = 1/sqrt2", ac1);
  report_line("AC2", "identity channel identities", ac2);
  report_line("AC3", "vanishing region of Q_Theta", ac3);
  report_line("AC4", "k = 1 environment entropy equals exchange entropy", ac4);
  report_line("AC5", "truncated-Fock oracle equivalence", ac5);
  report_line("AC6", "trace-norm law", ac6);
  report_line("AC7", "Q_G as the large-N limit of J", ac7);
  report_line("AC8", "Gaussian maximality probe", ac8);
  report_line("AC9", "small-N asymptotic gain", ac9);
  report_line("AC10", "additivity of Q_Theta", ac10);
  report_line("AC11", "figure regeneration", ac11);
  fmt::print("{} of 11 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
