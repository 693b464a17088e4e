#include "gausscap_cli/app.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gausscap/errors.hpp"
#include "gausscap/onemode.hpp"
#include "gausscap/units.hpp"
#include "gausscap_cli/config.hpp"
#include "gausscap_cli/format.hpp"
#include "gausscap_cli/pool.hpp"
#include "gausscap_cli/validate.hpp"

namespace gausscap::cli {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct OnemodeOptions {
  double k = kUnset;
  double nc = 0.0;
  double n = kUnset;
  std::string format = "text";
  std::string out;
};

struct FigureOptions {
  int id = 0;
  std::string out;
  std::optional<double> k_from, k_to, nc_from, nc_to;
  std::optional<int> k_steps, nc_steps;
  std::vector<double> n_values;
  int threads = default_threads();
};

struct SweepOptions {
  std::string param;
  double from = kUnset;
  double to = kUnset;
  int steps = 0;
  bool log = false;
  double k = 1.0;
  double nc = 0.0;
  double n = 1.0;
  std::string format = "csv";
  std::string out;
  int threads = default_threads();
};

struct ValidateOptions {
  int cutoff = 60;
  std::string preset = "quick";
  int threads = default_threads();
};

struct Options {
  std::string config;
  OnemodeOptions onemode;
  FigureOptions figure;
  SweepOptions sweep;
  ValidateOptions validate;
};

struct Commands {
  CLI::App* onemode;
  CLI::App* figure;
  CLI::App* sweep;
  CLI::App* validate;
};

Commands build(CLI::App& app, Options& o) {
  app.set_version_flag("--version", "gausscap 0.1.0");
  app.require_subcommand(1);

  Commands c{};
  c.onemode = app.add_subcommand("onemode", "Closed-form report for one (k, nc, N)");
  c.onemode->add_option("--k", o.onemode.k, "Attenuation (<1) or amplification (>1) coefficient");
  c.onemode->add_option("--nc", o.onemode.nc, "Classical noise variance")->capture_default_str();
  c.onemode->add_option("--n", o.onemode.n, "Mean input photon number");
  c.onemode->add_option("--format", o.onemode.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  c.onemode->add_option("--out", o.onemode.out, "Output file (default: stdout)");

  c.figure = app.add_subcommand("figure", "Write the data behind figure 1..5 as CSV");
  c.figure->add_option("--id", o.figure.id, "Figure number")->check(CLI::Range(1, 5));
  c.figure->add_option("--out", o.figure.out, "Output file (default: stdout)");
  c.figure->add_option("--k-from", o.figure.k_from, "First k of the grid");
  c.figure->add_option("--k-to", o.figure.k_to, "Last k of the grid");
  c.figure->add_option("--k-steps", o.figure.k_steps, "Number of k points");
  c.figure->add_option("--nc-from", o.figure.nc_from, "First nc of the grid");
  c.figure->add_option("--nc-to", o.figure.nc_to, "Last nc of the grid");
  c.figure->add_option("--nc-steps", o.figure.nc_steps, "Number of nc points");
  c.figure->add_option("--n", o.figure.n_values, "Input photon numbers, one curve each")->delimiter(',');
  c.figure->add_option("--threads", o.figure.threads, "Worker threads")->check(CLI::PositiveNumber);

  c.sweep = app.add_subcommand("sweep", "Evaluate the report along one parameter");
  c.sweep->add_option("--param", o.sweep.param, "Swept parameter")->check(CLI::IsMember({"k", "nc", "n"}));
  c.sweep->add_option("--from", o.sweep.from, "First value");
  c.sweep->add_option("--to", o.sweep.to, "Last value");
  c.sweep->add_option("--steps", o.sweep.steps, "Number of points (>= 2)");
  c.sweep->add_flag("--log", o.sweep.log, "Logarithmic spacing");
  c.sweep->add_option("--k", o.sweep.k, "Fixed k")->capture_default_str();
  c.sweep->add_option("--nc", o.sweep.nc, "Fixed nc")->capture_default_str();
  c.sweep->add_option("--n", o.sweep.n, "Fixed N")->capture_default_str();
  c.sweep->add_option("--format", o.sweep.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  c.sweep->add_option("--out", o.sweep.out, "Output file (default: stdout)");
  c.sweep->add_option("--threads", o.sweep.threads, "Worker threads")->check(CLI::PositiveNumber);

  c.validate = app.add_subcommand("validate", "Compare closed forms against the truncated-Fock oracle");
  c.validate->add_option("--cutoff", o.validate.cutoff, "Fock cutoff")->capture_default_str();
  c.validate->add_option("--preset", o.validate.preset, "Check set")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  c.validate->add_option("--threads", o.validate.threads, "Worker threads")->check(CLI::PositiveNumber);

  for (CLI::App* sub : {c.onemode, c.figure, c.sweep, c.validate}) {
    sub->add_option("--config", o.config, "key=value file; command-line flags take precedence");
  }
  return c;
}

CLI::App* active(const Commands& c) {
  for (CLI::App* sub : {c.onemode, c.figure, c.sweep, c.validate}) {
    if (sub->parsed()) return sub;
  }
  return nullptr;
}

// Output sink: stdout unless a path is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw IoError(path_.empty() ? std::string("write to stdout failed") : "write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

std::string header_comment() { return fmt::format("schema {}; units {}; c1_lower: {}", kSchemaVersion, unit_name(), kC1Label); }

int cmd_onemode(const OnemodeOptions& o, std::ostream& out) {
  require(!std::isnan(o.k), "onemode: --k is required");
  require(!std::isnan(o.n), "onemode: --n is required");
  const auto r = report({o.k, o.nc}, o.n);
  Sink sink(o.out, out);
  auto& os = sink.stream();
  if (o.format == "json") {
    os << record_json(r).dump(2) << '\n';
  } else if (o.format == "csv") {
    write_csv_comment(os, header_comment());
    write_csv_row(os, record_columns());
    write_csv_row(os, record_values(r));
  } else {
    write_text(os, r);
  }
  sink.finish();
  return kOk;
}

std::string figure_description(int id) {
  switch (id) {
    case 1: return "figure 1: gain vs k at nc = 0";
    case 2: return "figure 2: gain vs nc at k = 1";
    case 3: return "figure 3: output and exchange entropy vs k at nc = 0";
    case 4: return "figure 4: coherent information, Q_G and Q_Theta vs k at nc = 0";
    default: return "figure 5: Q_G over (k, nc); q_g_clamped = max(0, q_g_raw); q_theta_positive = 1 where Q_Theta > 0";
  }
}

int cmd_figure(const FigureOptions& o, std::ostream& out) {
  require(o.id >= 1 && o.id <= 5, "figure: --id 1..5 is required");
  FigureGrid grid = default_figure_grid(o.id);
  const bool default_curves = o.n_values.empty();
  if (o.k_from) grid.k_from = *o.k_from;
  if (o.k_to) grid.k_to = *o.k_to;
  if (o.k_steps) grid.k_steps = *o.k_steps;
  if (o.nc_from) grid.nc_from = *o.nc_from;
  if (o.nc_to) grid.nc_to = *o.nc_to;
  if (o.nc_steps) grid.nc_steps = *o.nc_steps;
  if (!default_curves) grid.n_values = o.n_values;

  const auto columns = figure_columns(o.id, grid);
  const auto points = figure_points(o.id, grid);

  Sink sink(o.out, out);
  auto& os = sink.stream();
  write_csv_comment(os, figure_description(o.id));
  write_csv_comment(os, fmt::format("schema {}; units {}", kSchemaVersion, unit_name()));
  if (default_curves && o.id <= 3) write_csv_comment(os, "input photon numbers 0.1, 1, 10 are a tool default");
  if (o.id <= 2) write_csv_comment(os, std::string("gain denominator c1_lower is the ") + kC1Label);
  write_csv_row(os, columns);
  ordered_parallel<std::vector<double>>(
      points.size(), o.threads, [&](std::size_t i) { return figure_row(o.id, grid, points[i]); },
      [&](std::size_t, std::vector<double> row) { write_csv_row(os, row); });
  sink.finish();
  return kOk;
}

std::vector<double> sweep_values(const SweepOptions& o) {
  require(!o.param.empty(), "sweep: --param is required");
  require(!std::isnan(o.from) && !std::isnan(o.to), "sweep: --from and --to are required");
  require(o.from != o.to, "sweep: need --from != --to");
  require(o.steps >= 2, "sweep: need --steps >= 2");
  if (o.log) require(o.from > 0.0 && o.to > 0.0, "sweep: logarithmic spacing needs positive --from and --to");
  std::vector<double> v;
  for (int i = 0; i < o.steps; ++i) {
    const double t = static_cast<double>(i) / (o.steps - 1);
    double x;
    if (i == o.steps - 1) {
      x = o.to;
    } else if (o.log) {
      x = std::exp(std::log(o.from) + t * (std::log(o.to) - std::log(o.from)));
    } else {
      x = o.from + t * (o.to - o.from);
    }
    v.push_back(round_significant(x, kSignificantDigits));
  }
  return v;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  const auto values = sweep_values(o);
  auto point = [&](std::size_t i) {
    double k = o.k, nc = o.nc, n = o.n;
    if (o.param == "k") k = values[i];
    if (o.param == "nc") nc = values[i];
    if (o.param == "n") n = values[i];
    return report({k, nc}, n);
  };
  // Reject bad fixed values before any output.
  report({o.param == "k" ? values[0] : o.k, o.param == "nc" ? values[0] : o.nc}, o.param == "n" ? values[0] : o.n);

  Sink sink(o.out, out);
  auto& os = sink.stream();
  if (o.format == "csv") {
    write_csv_comment(os, header_comment());
    write_csv_row(os, record_columns());
    ordered_parallel<OneModeReport>(values.size(), o.threads, point, [&](std::size_t, const OneModeReport& r) {
      write_csv_row(os, record_values(r));
      os.flush();
    });
  } else if (o.format == "text") {
    std::string line;
    for (const auto& c : record_columns()) line += fmt::format("{:>20}", c);
    os << line << '\n';
    ordered_parallel<OneModeReport>(values.size(), o.threads, point, [&](std::size_t, const OneModeReport& r) {
      std::string row;
      for (double v : record_values(r)) row += fmt::format("{:>20}", format_number(v));
      os << row << '\n';
      os.flush();
    });
  } else {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["schema"] = kSchemaVersion;
    doc["units"] = unit_name();
    doc["labels"] = {{"c1_lower", kC1Label}};
    doc["param"] = o.param;
    doc["rows"] = nlohmann::ordered_json::array();
    ordered_parallel<OneModeReport>(values.size(), o.threads, point, [&](std::size_t, const OneModeReport& r) {
      auto rec = record_json(r);
      rec.erase("schema");
      rec.erase("units");
      rec.erase("labels");
      doc["rows"].push_back(std::move(rec));
    });
    os << doc.dump(2) << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  const auto checks = validation_checks(parse_preset(o.preset), o.cutoff);
  std::vector<CheckResult> failed;
  std::size_t passed = 0;
  out << fmt::format("validate: preset {}, cutoff {}, {} checks\n", o.preset, o.cutoff, checks.size());
  ordered_parallel<CheckResult>(
      checks.size(), o.threads, [&](std::size_t i) { return run_check(checks[i]); },
      [&](std::size_t, CheckResult r) {
        out << fmt::format("{} err={} tol={:.0e} {}", r.passed ? "PASS" : "FAIL",
                           std::isnan(r.error) ? std::string("n/a") : fmt::format("{:.3e}", r.error), r.tolerance,
                           r.name);
        if (!r.note.empty()) out << " [" << r.note << "]";
        out << '\n';
        out.flush();
        if (r.passed) {
          ++passed;
        } else {
          failed.push_back(std::move(r));
        }
      });
  out << fmt::format("{}/{} checks passed\n", passed, checks.size());
  if (failed.empty()) return kOk;
  err << fmt::format("validation failed ({} of {}):\n", failed.size(), checks.size());
  for (const auto& f : failed) err << "  " << f.name << (f.note.empty() ? "" : " [" + f.note + "]") << '\n';
  return kValidationFailed;
}

void apply_log_base_env() {
  const char* env = std::getenv("GAUSSCAP_LOG_BASE");
  if (env == nullptr || *env == '\0') {
    set_log_base(LogBase::bits);
    return;
  }
  const std::string v(env);
  if (v != "2" && v != "e") throw UsageError("GAUSSCAP_LOG_BASE must be 2 or e, got '" + v + "'");
  set_log_base(parse_log_base(v));
}

// Re-parses with configuration entries appended for options that were not
// given on the command line.
std::vector<std::string> merged_arguments(int argc, const char* const* argv, CLI::App* sub, const ConfigEntries& entries) {
  std::vector<std::string> args(argv, argv + argc);
  for (const auto& [key, value] : entries) {
    if (key == "config") throw UsageError("config files cannot include other config files");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "' for " + sub->get_name());
    if (opt->count() == 0) args.push_back("--" + key + "=" + value);
  }
  return args;
}

int dispatch(const Options& o, const Commands& c, CLI::App* sub, std::ostream& out, std::ostream& err) {
  if (sub == c.onemode) return cmd_onemode(o.onemode, out);
  if (sub == c.figure) return cmd_figure(o.figure, out);
  if (sub == c.sweep) return cmd_sweep(o.sweep, out);
  return cmd_validate(o.validate, out, err);
}

int parse(CLI::App& app, int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool& done) {
  done = false;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    done = true;
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ScopedLogBase restore(log_base());
  try {
    apply_log_base_env();

    Options opts;
    CLI::App app{"Gaussian bosonic channel entropies and capacities"};
    Commands cmds = build(app, opts);
    bool done = false;
    int code = parse(app, argc, argv, out, err, done);
    if (done) return code;
    CLI::App* sub = active(cmds);

    if (!opts.config.empty()) {
      const auto entries = read_config_file(opts.config);
      const auto args = merged_arguments(argc, argv, sub, entries);
      std::vector<const char*> cargs;
      for (const auto& a : args) cargs.push_back(a.c_str());

      Options merged;
      CLI::App app2{"Gaussian bosonic channel entropies and capacities"};
      Commands cmds2 = build(app2, merged);
      code = parse(app2, static_cast<int>(cargs.size()), cargs.data(), out, err, done);
      if (done) return code;
      return dispatch(merged, cmds2, active(cmds2), out, err);
    }
    return dispatch(opts, cmds, sub, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailed;
  }
}

}  // namespace gausscap::cli
