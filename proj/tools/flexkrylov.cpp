// Command-line harness for the experiments and audit suites.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexkrylov/errors.hpp"
#include "flexkrylov/experiments.hpp"

namespace {

using flexkrylov::ExperimentConfig;
using flexkrylov::RunReport;

struct CliOptions {
  std::string experiment = "fig1";
  int n = 0;
  double kappa_max = 2.0;
  std::vector<double> eta;
  int coarse = 0;
  int iters = 0;
  std::uint64_t seed = 42;
  std::string out = ".";
  bool csv = false;
  bool svg = false;
  bool audit = false;
  std::string config_file;
};

std::map<std::string, CLI::Option*> add_common_options(CLI::App& cmd, CliOptions& opt) {
  std::map<std::string, CLI::Option*> by_key;
  by_key["experiment"] = cmd.add_option("--experiment", opt.experiment, "fig1|fig2|fig3|custom")
                             ->check(CLI::IsMember({"fig1", "fig2", "fig3", "custom"}));
  by_key["n"] = cmd.add_option("--n", opt.n, "problem dimension (0 = experiment default)");
  by_key["kappa-max"] = cmd.add_option("--kappa-max", opt.kappa_max, "preconditioner quality bound");
  by_key["eta"] = cmd.add_option("--eta", opt.eta, "inner-CG stopping factors")->delimiter(',');
  by_key["coarse"] = cmd.add_option("--coarse", opt.coarse, "coarse grid point count");
  by_key["iters"] = cmd.add_option("--iters", opt.iters, "iteration count / cap");
  by_key["seed"] = cmd.add_option("--seed", opt.seed, "64-bit RNG seed");
  by_key["out"] = cmd.add_option("--out", opt.out, "output directory");
  cmd.add_option("--config", opt.config_file, "flat key=value config file; flags override");
  return by_key;
}

// Flat key=value config mirroring the long flag names. Values already given
// on the command line win.
void apply_config_file(const CliOptions& parsed, CliOptions& opt,
                       const std::map<std::string, CLI::Option*>& by_key,
                       const std::map<std::string, CLI::Option*>& flag_keys) {
  if (parsed.config_file.empty()) return;
  std::ifstream in(parsed.config_file);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + parsed.config_file + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "line " + std::to_string(lineno) + " is not key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    auto overridden = [&](const std::string& k) {
      auto it = by_key.find(k);
      if (it != by_key.end() && it->second->count() > 0) return true;
      auto fit = flag_keys.find(k);
      return fit != flag_keys.end() && fit->second->count() > 0;
    };
    if (overridden(key)) continue;

    std::istringstream v(value);
    if (key == "experiment") opt.experiment = value;
    else if (key == "n") v >> opt.n;
    else if (key == "kappa-max" || key == "kappa_max") v >> opt.kappa_max;
    else if (key == "eta") {
      opt.eta.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) opt.eta.push_back(std::stod(item));
    } else if (key == "coarse") v >> opt.coarse;
    else if (key == "iters") v >> opt.iters;
    else if (key == "seed") v >> opt.seed;
    else if (key == "out") opt.out = value;
    else if (key == "csv") opt.csv = (value == "true" || value == "1");
    else if (key == "svg") opt.svg = (value == "true" || value == "1");
    else if (key == "audit") opt.audit = (value == "true" || value == "1");
    else throw CLI::ValidationError("--config", "unknown key '" + key + "'");
  }
}

ExperimentConfig to_config(const CliOptions& opt, bool force_audit) {
  ExperimentConfig cfg;
  cfg.id = flexkrylov::experiment_from_string(opt.experiment);
  cfg.n = opt.n;
  cfg.kappa_max = opt.kappa_max;
  cfg.eta_list = opt.eta;
  cfg.coarse_count = opt.coarse;
  cfg.iterations = opt.iters;
  cfg.seed = opt.seed;
  cfg.out_dir = opt.out;
  cfg.emit_csv = opt.csv;
  cfg.emit_svg = opt.svg;
  cfg.emit_audit = opt.audit || force_audit;
  return cfg;
}

int report_and_emit(const RunReport& report, bool print_audit) {
  for (const auto& h : report.histories) {
    std::cout << h.method << (h.variant.empty() ? "" : " (" + h.variant + ")") << ": "
              << (h.error_a_norm.empty() ? 0 : h.error_a_norm.size() - 1) << " steps, termination "
              << flexkrylov::to_string(h.termination);
    if (!h.error_a_norm.empty())
      std::cout << ", final |e|_A = " << h.error_a_norm.back();
    std::cout << "\n";
  }
  for (const std::string& f : report.failures) std::cout << "failure: " << f << "\n";
  const auto paths = flexkrylov::emit_report(report);
  for (const std::string& p : paths) std::cout << "wrote " << p << "\n";
  if (print_audit) std::cout << "\n" << flexkrylov::report_audit_text(report);

  if (!report.failures.empty()) return 2;
  if (print_audit) {
    for (const auto& s : report.audits) {
      const bool flagged = s.error_transition > 1e-10 || s.direction_orthogonality > 1e-9 ||
                           s.error_orthogonality > 1e-9 || s.sd_identity > 1e-10 || !s.envelope_ok;
      if (flagged) return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexible Krylov iterations with variable preconditioning"};
  app.require_subcommand(1);

  CliOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run an experiment and emit its report");
  auto run_keys = add_common_options(*run, run_opt);
  std::map<std::string, CLI::Option*> run_flags;
  run_flags["csv"] = run->add_flag("--csv", run_opt.csv, "write per-method CSV files");
  run_flags["svg"] = run->add_flag("--svg", run_opt.svg, "write an SVG convergence chart");
  run_flags["audit"] = run->add_flag("--audit", run_opt.audit, "run the identity audits and write the report");

  CliOptions audit_opt;
  CLI::App* audit = app.add_subcommand("audit", "run an experiment's lemma audit suites only");
  auto audit_keys = add_common_options(*audit, audit_opt);
  std::map<std::string, CLI::Option*> audit_flags;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      apply_config_file(run_opt, run_opt, run_keys, run_flags);
      return report_and_emit(flexkrylov::run_experiment(to_config(run_opt, false)), run_opt.audit);
    }
    apply_config_file(audit_opt, audit_opt, audit_keys, audit_flags);
    return report_and_emit(flexkrylov::run_experiment(to_config(audit_opt, true)), true);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const flexkrylov::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
