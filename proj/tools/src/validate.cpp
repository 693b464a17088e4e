#include "gausscap_cli/validate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <exception>

#include "gausscap/errors.hpp"
#include "gausscap/fock_oracle.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap_cli/config.hpp"

namespace gausscap::cli {
namespace {

using fock::ChannelSpec;
using fock::FockChannel;

double output_entropy_error(ChannelSpec spec, double n, int cutoff) {
  const FockChannel ch(spec, cutoff);
  const double oracle = fock::vn_entropy(ch.apply(fock::thermal_fock(n, cutoff)));
  return std::abs(oracle - report({spec.k, spec.nc}, n).h_out);
}

double exchange_entropy_error(ChannelSpec spec, double n, int cutoff) {
  return std::abs(fock::exchange_entropy_fock(spec, n, cutoff) - report({spec.k, spec.nc}, n).h_exch);
}

double probe_violation(const fock::ProbeResult& r) { return std::max(0.0, r.i_perturbed - r.i_gaussian); }

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "quick") return Preset::quick;
  if (name == "full") return Preset::full;
  throw UsageError("unknown preset '" + name + "' (expected quick or full)");
}

std::vector<ValidationCheck> validation_checks(Preset preset, int cutoff) {
  if (cutoff < 1) throw UsageError("cutoff must be positive");
  const int c = cutoff;
  std::vector<ValidationCheck> checks = {
      {"thermal N=1 entropy vs g(1)", 1e-6,
       [c] { return std::abs(fock::vn_entropy(fock::thermal_fock(1.0, c)) - g_function(1.0)); }},
      {"attenuation k=0.8 Kraus vs unitary route", 1e-10,
       [c] {
         const auto rho = fock::thermal_fock(1.0, c);
         const auto a = fock::attenuate_fock(rho, 0.8, fock::AttenuationRoute::kraus);
         const auto b = fock::attenuate_fock(rho, 0.8, fock::AttenuationRoute::unitary);
         return (a.matrix - b.matrix).cwiseAbs().maxCoeff();
       }},
      {"attenuation k=0.8 N=1 output entropy vs g(0.64)", 1e-4,
       [c] {
         const auto out = fock::attenuate_fock(fock::thermal_fock(1.0, c), 0.8);
         return std::abs(fock::vn_entropy(out) - g_function(0.64));
       }},
      {"classical noise nc=0.5 on vacuum vs g(0.5)", 1e-4,
       [c] {
         const auto out = fock::classical_noise_fock(fock::thermal_fock(0.0, c), 0.5);
         return std::abs(fock::vn_entropy(out) - g_function(0.5));
       }},
      {"classical noise nc=1 on N=1 vs g(2)", 1e-3,
       [c] {
         const auto out = fock::classical_noise_fock(fock::thermal_fock(1.0, c), 1.0);
         return std::abs(fock::vn_entropy(out) - g_function(2.0));
       }},
      {"exchange entropy k=0.8 nc=0 N=1", 1e-3, [c] { return exchange_entropy_error({0.8, 0.0}, 1.0, c); }},
      {"exchange entropy k=1 nc=0.5 N=1 vs environment matrix", 1e-3,
       [c] { return std::abs(fock::exchange_entropy_fock({1.0, 0.5}, 1.0, c) - env_entropy_k1(1.0, 0.5).entropy); }},
      {"exchange entropy k=0.5 nc=0.5 N=0.2", 1e-3, [c] { return exchange_entropy_error({0.5, 0.5}, 0.2, c); }},
      {"trace norm gamma=0.25", 1e-6, [c] { return std::abs(fock::trace_norm_fock(0.25, c) - 2.0); }},
      {"trace norm gamma=0.3", 1e-5, [c] { return std::abs(fock::trace_norm_fock(0.3, c) - 1.0 / 0.6); }},
      {"maximality k=0.8 N=1, populations 1/2 on |0>, |2>", 1e-6,
       [c] { return probe_violation(fock::gaussian_maximality_probe({0.8, 0.0}, 1.0, {0.5, 0.0, 0.5}, 0.3, c)); }},
      {"purification marginal entropy N=1 vs g(1)", 1e-6,
       [c] {
         const auto psi = fock::purified_thermal(1.0, c);
         const fock::CMatrix joint = psi * psi.adjoint();
         return std::abs(fock::vn_entropy(fock::partial_trace(joint, c, false)) - g_function(1.0));
       }},
  };
  if (preset == Preset::quick) return checks;

  for (double k : {0.5, 0.8, 1.0}) {
    for (double nc : {0.0, 0.5}) {
      for (double n : {0.2, 1.0}) {
        const std::string tag = fmt::format("k={} nc={} N={}", k, nc, n);
        checks.push_back({"output entropy " + tag, 1e-4, [=] { return output_entropy_error({k, nc}, n, c); }});
        checks.push_back({"exchange entropy " + tag, 1e-3, [=] { return exchange_entropy_error({k, nc}, n, c); }});
      }
    }
  }
  for (double n : {0.0, 0.5, 2.0}) {
    checks.push_back({fmt::format("environment matrix vs Fock exchange entropy nc=0.5 N={}", n), 1e-3, [=] {
                        return std::abs(fock::exchange_entropy_fock({1.0, 0.5}, n, c) - env_entropy_k1(n, 0.5).entropy);
                      }});
  }
  for (double gamma : {0.1, 0.25, 0.4, 0.5, 1.0, 3.0}) {
    checks.push_back({fmt::format("trace norm gamma={}", gamma), 1e-5, [=] {
                        return std::abs(fock::trace_norm_fock(gamma, c) - std::max(1.0, 1.0 / (2.0 * gamma)));
                      }});
  }
  const ChannelSpec probes[] = {{0.8, 0.0}, {0.6, 0.3}};
  for (const auto& spec : probes) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      checks.push_back({fmt::format("maximality k={} nc={} N=0.8 seed={}", spec.k, spec.nc, seed), 1e-6, [=] {
                          fock::ProbeOptions opt;
                          opt.cutoff = std::min(c, 30);
                          return probe_violation(fock::gaussian_maximality_probe(spec, 0.8, seed, opt));
                        }});
    }
  }
  return checks;
}

CheckResult run_check(const ValidationCheck& check) {
  CheckResult r;
  r.name = check.name;
  r.tolerance = check.tolerance;
  try {
    r.error = check.run();
    r.passed = r.error <= check.tolerance;
  } catch (const CutoffTooSmall& e) {
    r.error = std::nan("");
    r.note = fmt::format("cutoff too small: {} (leak {:.3g}", e.what(), e.leak());
    r.note += e.required_cutoff() > 0 ? fmt::format(", need about {})", e.required_cutoff()) : ")";
  } catch (const std::exception& e) {
    r.error = std::nan("");
    r.note = e.what();
  }
  return r;
}

}  // namespace gausscap::cli
