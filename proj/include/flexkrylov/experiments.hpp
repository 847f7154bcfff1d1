#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexkrylov/solver.hpp"

namespace flexkrylov {

enum class ExperimentId { fig1, fig2, fig3, custom };

std::string to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentId id = ExperimentId::fig1;
  int n = 0;                    // 0 = experiment default
  double kappa_max = 2.0;
  std::vector<double> eta_list; // empty = default {0.2, 0.4, 0.6, 0.8}
  int coarse_count = 0;         // 0 = default 600
  int iterations = 0;           // 0 = experiment default
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  bool emit_csv = false;
  bool emit_svg = false;
  bool emit_audit = false;
  // custom-experiment controls
  std::vector<std::string> methods;  // subset of {psd, pcg, full, alg1-standard, alg1-modified}
  std::string custom_preconditioner = "adversarial";
};

/// Fills unset fields with the experiment's published parameters.
ExperimentConfig resolved_defaults(ExperimentConfig config);

struct MethodHistory {
  std::string method;
  std::string variant;               // eta value or coarse-grid mode, empty otherwise
  std::vector<double> error_a_norm;  // |e_k|_A, k = 0..K
  std::vector<double> reduction;     // per step, k = 0..K-1
  std::vector<int> inner_iterations; // per step (empty when not reported)
  std::vector<double> bound;         // bound^k |e_0|_A when applicable, else empty
  TerminationReason termination = TerminationReason::max_iterations;
  double wall_seconds = 0.0;
  int iterations_to_tolerance = -1;  // first k with |e_k|_A <= 1e-8 |e_0|_A
};

struct AuditSummary {
  std::string run;
  double error_transition = 0.0;
  double direction_orthogonality = 0.0;
  double error_orthogonality = 0.0;
  double sd_identity = -1.0;  // steepest-descent traces only, -1 otherwise
  bool envelope_ok = true;    // reduction factors against the spectral bound where kappa is reported
};

struct RunReport {
  ExperimentConfig config;
  std::vector<MethodHistory> histories;
  std::vector<AuditSummary> audits;       // populated when emit_audit is on
  std::vector<std::string> failures;      // sub-runs that ended in numerical errors
};

/// Runs one experiment. All randomness derives from config.seed; identical
/// configurations produce identical reports.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes CSV / SVG / audit files per the config's emit flags into
/// config.out_dir (created if missing); returns the written paths.
std::vector<std::string> emit_report(const RunReport& report);

std::string history_csv(const RunReport& report, const MethodHistory& history);
std::string report_svg(const RunReport& report);
std::string report_audit_text(const RunReport& report);

}  // namespace flexkrylov
