#include "flexkrylov/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "flexkrylov/adversarial.hpp"
#include "flexkrylov/audit.hpp"
#include "flexkrylov/cone.hpp"
#include "flexkrylov/errors.hpp"
#include "flexkrylov/inner_cg.hpp"
#include "flexkrylov/rng.hpp"
#include "flexkrylov/two_grid.hpp"

namespace flexkrylov {

namespace {

constexpr double kToleranceForIterationCount = 1e-8;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct RunOutcome {
  MethodHistory history;
  SolveTrace trace;
};

int iterations_to(const std::vector<double>& error_history, double relative_tol) {
  if (error_history.empty() || error_history[0] == 0.0) return -1;
  const double target = relative_tol * error_history[0];
  for (std::size_t k = 0; k < error_history.size(); ++k)
    if (error_history[k] <= target) return static_cast<int>(k);
  return -1;
}

RunOutcome execute_method(const SymmetricOperator& a, const Vector& b, const Vector& x0,
                          const std::string& method, const std::string& variant, Preconditioner& precond,
                          const StoppingRule& stop, const Vector& x_true) {
  const auto start = std::chrono::steady_clock::now();
  SolveTrace trace;
  if (method == "psd")
    trace = solve_flexible(a, b, x0, precond, MemoryPolicy::psd(), stop, &x_true);
  else if (method == "pcg")
    trace = solve_flexible(a, b, x0, precond, MemoryPolicy::pcg(), stop, &x_true);
  else if (method == "full")
    trace = solve_flexible(a, b, x0, precond, MemoryPolicy::full(), stop, &x_true);
  else if (method == "alg1-standard" || method == "alg1-modified") {
    AlgOneOptions opts;
    // audit-grade runs: keep the recurred residual pinned to the true one
    opts.residual_refresh_interval = 1;
    trace = solve_alg1(a, b, x0, precond,
                       method == "alg1-standard" ? BetaFormula::standard : BetaFormula::modified, stop,
                       &x_true, opts);
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  const auto end = std::chrono::steady_clock::now();

  RunOutcome out;
  out.history.method = method;
  out.history.variant = variant;
  out.history.error_a_norm = trace.error_a_norm;
  out.history.reduction = trace.reduction;
  out.history.inner_iterations.reserve(trace.precond_meta.size());
  for (const ApplyMeta& m : trace.precond_meta) out.history.inner_iterations.push_back(m.inner_iterations);
  out.history.termination = trace.termination;
  out.history.wall_seconds = std::chrono::duration<double>(end - start).count();
  out.history.iterations_to_tolerance = iterations_to(trace.error_a_norm, kToleranceForIterationCount);
  out.trace = std::move(trace);
  return out;
}

AuditSummary audit_run(const std::string& run_name, const SolveTrace& trace, const SymmetricOperator& a,
                       const Vector& x_true, double configured_kappa_max) {
  AuditSummary s;
  s.run = run_name;
  s.error_transition = audit_error_transition(trace, a, x_true);
  const OrthogonalityReport orth = audit_orthogonality(trace, a, &x_true);
  s.direction_orthogonality = orth.max_direction_residual;
  s.error_orthogonality = orth.max_error_residual;
  bool is_sd = !trace.ortho_window.empty() && trace.step_beta.empty();
  for (int m : trace.ortho_window)
    if (m != 0) is_sd = false;
  if (is_sd) s.sd_identity = audit_sd_reduction(trace, a, x_true);
  const double envelope = spectral_bound(configured_kappa_max) + 1e-10;
  for (std::size_t k = 0; k < trace.reduction.size(); ++k) {
    const auto& kappa = trace.precond_meta[k].kappa_estimate;
    if (kappa && *kappa <= configured_kappa_max && trace.reduction[k] > envelope) s.envelope_ok = false;
  }
  return s;
}

void append_run(RunReport& report, RunOutcome outcome, const SymmetricOperator& a, const Vector& x_true) {
  if (report.config.emit_audit) {
    std::string name = outcome.history.method;
    if (!outcome.history.variant.empty()) name += "/" + outcome.history.variant;
    report.audits.push_back(audit_run(name, outcome.trace, a, x_true, report.config.kappa_max));
  }
  report.histories.push_back(std::move(outcome.history));
}

void run_fig1(RunReport& report) {
  const ExperimentConfig& cfg = report.config;
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(cfg.n);
  const Vector x_true(cfg.n, 0.0);
  const Vector b(cfg.n, 0.0);
  Splitmix64Rng rng(cfg.seed);
  const Vector x0 = rng.fork(0).normal_vector(cfg.n);
  StoppingRule stop;
  stop.max_iterations = cfg.iterations;

  const std::vector<std::string> methods = {"full", "alg1-modified", "alg1-standard"};
  for (std::size_t i = 0; i < methods.size(); ++i) {
    AdversarialPreconditioner precond(cfg.kappa_max, rng.fork(1 + i));
    try {
      append_run(report, execute_method(a, b, x0, methods[i], "", precond, stop, x_true), a, x_true);
    } catch (const NumericalError& err) {
      report.failures.push_back(methods[i] + ": " + err.what());
    }
  }

  // the theoretical line bound^k |e_0|_A
  const double bound = spectral_bound(cfg.kappa_max);
  const double e0 = a.a_norm(subtract(x_true, x0));
  MethodHistory line;
  line.method = "bound";
  line.error_a_norm.resize(cfg.iterations + 1);
  line.bound.resize(cfg.iterations + 1);
  for (int k = 0; k <= cfg.iterations; ++k) {
    line.error_a_norm[k] = std::pow(bound, k) * e0;
    line.bound[k] = line.error_a_norm[k];
  }
  line.reduction.assign(cfg.iterations, bound);
  line.iterations_to_tolerance = iterations_to(line.error_a_norm, kToleranceForIterationCount);
  // attach the same bound column to the method histories
  for (MethodHistory& h : report.histories) {
    if (h.method == "bound" || h.error_a_norm.empty()) continue;
    h.bound.resize(h.error_a_norm.size());
    for (std::size_t k = 0; k < h.bound.size(); ++k)
      h.bound[k] = std::pow(bound, static_cast<double>(k)) * h.error_a_norm[0];
  }
  report.histories.push_back(std::move(line));
}

void run_fig2(RunReport& report) {
  const ExperimentConfig& cfg = report.config;
  Vector diag(cfg.n);
  std::iota(diag.begin(), diag.end(), 1.0);
  const SymmetricOperator a = SymmetricOperator::diagonal(std::move(diag));
  const Vector x_true(cfg.n, 0.0);
  const Vector b(cfg.n, 0.0);
  Splitmix64Rng rng(cfg.seed);
  const Vector x0 = rng.fork(0).normal_vector(cfg.n);
  StoppingRule stop;
  stop.max_iterations = cfg.iterations;

  for (double eta : cfg.eta_list) {
    for (const std::string& method : {std::string("psd"), std::string("pcg")}) {
      InnerCgPreconditioner precond(eta);
      try {
        append_run(report, execute_method(a, b, x0, method, format_short(eta), precond, stop, x_true), a,
                   x_true);
      } catch (const NumericalError& err) {
        report.failures.push_back(method + "/eta=" + format_short(eta) + ": " + err.what());
      }
    }
  }
}

void run_fig3(RunReport& report) {
  const ExperimentConfig& cfg = report.config;
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(cfg.n);
  const Vector x_true(cfg.n, 0.0);
  const Vector b(cfg.n, 0.0);
  Splitmix64Rng rng(cfg.seed);
  const Vector x0 = rng.fork(0).normal_vector(cfg.n);
  StoppingRule stop;
  stop.max_iterations = cfg.iterations;
  stop.error_tolerance = 1e-8;

  const std::vector<std::string> methods = {"psd", "pcg", "full"};
  for (const CoarseGridMode mode : {CoarseGridMode::fixed, CoarseGridMode::rerandomized}) {
    const std::string variant = (mode == CoarseGridMode::fixed) ? "fixed" : "random";
    for (std::size_t i = 0; i < methods.size(); ++i) {
      // the fixed preconditioner uses one shared coarse sample; the random
      // one draws an independent stream per method
      const Splitmix64Rng stream =
          (mode == CoarseGridMode::fixed) ? rng.fork(10) : rng.fork(20 + i);
      TwoGridPreconditioner precond(cfg.n, cfg.coarse_count, mode, stream);
      try {
        append_run(report, execute_method(a, b, x0, methods[i], variant, precond, stop, x_true), a, x_true);
      } catch (const NumericalError& err) {
        report.failures.push_back(methods[i] + "/" + variant + ": " + err.what());
      }
    }
  }
}

void run_custom(RunReport& report) {
  const ExperimentConfig& cfg = report.config;
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(cfg.n);
  const Vector x_true(cfg.n, 0.0);
  const Vector b(cfg.n, 0.0);
  Splitmix64Rng rng(cfg.seed);
  const Vector x0 = rng.fork(0).normal_vector(cfg.n);
  StoppingRule stop;
  stop.max_iterations = cfg.iterations;

  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    std::unique_ptr<Preconditioner> precond;
    const std::string& kind = cfg.custom_preconditioner;
    if (kind == "adversarial")
      precond = adversarial(cfg.kappa_max, rng.fork(1 + i));
    else if (kind == "inner-cg")
      precond = inner_cg(cfg.eta_list.empty() ? 0.5 : cfg.eta_list.front());
    else if (kind == "two-grid-fixed")
      precond = two_grid_preconditioner(cfg.n, cfg.coarse_count, CoarseGridMode::fixed, rng.fork(10));
    else if (kind == "two-grid-random")
      precond = two_grid_preconditioner(cfg.n, cfg.coarse_count, CoarseGridMode::rerandomized, rng.fork(20 + i));
    else if (kind == "jacobi")
      precond = jacobi_preconditioner(a);
    else if (kind == "identity")
      precond = identity_preconditioner();
    else
      throw std::invalid_argument("unknown preconditioner '" + kind + "'");
    try {
      append_run(report, execute_method(a, b, x0, cfg.methods[i], "", *precond, stop, x_true), a, x_true);
    } catch (const NumericalError& err) {
      report.failures.push_back(cfg.methods[i] + ": " + err.what());
    }
  }
}

}  // namespace

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::fig1:
      return "fig1";
    case ExperimentId::fig2:
      return "fig2";
    case ExperimentId::fig3:
      return "fig3";
    case ExperimentId::custom:
      return "custom";
  }
  return "?";
}

ExperimentId experiment_from_string(const std::string& name) {
  if (name == "fig1") return ExperimentId::fig1;
  if (name == "fig2") return ExperimentId::fig2;
  if (name == "fig3") return ExperimentId::fig3;
  if (name == "custom") return ExperimentId::custom;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

ExperimentConfig resolved_defaults(ExperimentConfig config) {
  switch (config.id) {
    case ExperimentId::fig1:
      if (config.n == 0) config.n = 200;
      if (config.iterations == 0) config.iterations = 60;
      break;
    case ExperimentId::fig2:
      if (config.n == 0) config.n = 2000;
      if (config.iterations == 0) config.iterations = 100;
      if (config.eta_list.empty()) config.eta_list = {0.2, 0.4, 0.6, 0.8};
      break;
    case ExperimentId::fig3:
      if (config.n == 0) config.n = 3000;
      if (config.iterations == 0) config.iterations = 400;
      if (config.coarse_count == 0) config.coarse_count = 600;
      break;
    case ExperimentId::custom:
      if (config.n == 0) config.n = 100;
      if (config.iterations == 0) config.iterations = 50;
      if (config.coarse_count == 0) config.coarse_count = std::max(1, config.n / 5);
      if (config.methods.empty()) config.methods = {"psd", "pcg", "full"};
      break;
  }
  return config;
}

RunReport run_experiment(const ExperimentConfig& config) {
  ExperimentConfig cfg = resolved_defaults(config);
  if (cfg.n < 1) throw std::invalid_argument("run_experiment: dimension must be positive");
  if (cfg.iterations < 1) throw std::invalid_argument("run_experiment: iteration count must be positive");
  if (cfg.id == ExperimentId::fig1 && !(cfg.kappa_max > 1.0))
    throw std::invalid_argument("run_experiment: fig1 needs kappa_max > 1");
  for (double eta : cfg.eta_list)
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("run_experiment: eta values must lie in (0, 1)");

  RunReport report;
  report.config = cfg;
  switch (cfg.id) {
    case ExperimentId::fig1:
      run_fig1(report);
      break;
    case ExperimentId::fig2:
      run_fig2(report);
      break;
    case ExperimentId::fig3:
      run_fig3(report);
      break;
    case ExperimentId::custom:
      run_custom(report);
      break;
  }
  return report;
}

std::string history_csv(const RunReport&, const MethodHistory& history) {
  std::string out = "iteration,method,eta_or_mode,error_A_norm,reduction_factor,bound,precond_inner_iters\n";
  for (std::size_t k = 0; k < history.error_a_norm.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += history.method;
    out += ',';
    out += history.variant;
    out += ',';
    out += format_real(history.error_a_norm[k]);
    out += ',';
    if (k >= 1 && k - 1 < history.reduction.size()) out += format_real(history.reduction[k - 1]);
    out += ',';
    if (k < history.bound.size()) out += format_real(history.bound[k]);
    out += ',';
    if (k >= 1 && k - 1 < history.inner_iterations.size())
      out += std::to_string(history.inner_iterations[k - 1]);
    out += '\n';
  }
  return out;
}

std::string report_svg(const RunReport& report) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
  const int width = 880, height = 560;
  const int ml = 70, mr = 190, mt = 40, mb = 50;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  std::size_t max_len = 2;
  double lo = 0.0, hi = 0.0;
  bool have = false;
  for (const MethodHistory& h : report.histories) {
    max_len = std::max(max_len, h.error_a_norm.size());
    for (double v : h.error_a_norm) {
      if (v <= 0.0) continue;
      const double lg = std::log10(v);
      if (!have) {
        lo = hi = lg;
        have = true;
      } else {
        lo = std::min(lo, lg);
        hi = std::max(hi, lg);
      }
    }
  }
  if (!have) {
    lo = -1.0;
    hi = 1.0;
  }
  if (hi - lo < 1.0) hi = lo + 1.0;

  auto x_of = [&](std::size_t k) { return ml + plot_w * static_cast<double>(k) / static_cast<double>(max_len - 1); };
  auto y_of = [&](double lg) { return mt + plot_h * (hi - lg) / (hi - lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << to_string(report.config.id) << " (n=" << report.config.n << ", seed=" << report.config.seed
      << ")</text>\n";

  // decade grid
  int tick_step = 1;
  while ((hi - lo) / tick_step > 12) ++tick_step;
  for (int d = static_cast<int>(std::ceil(lo)); d <= static_cast<int>(std::floor(hi)); d += tick_step) {
    const double y = y_of(d);
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << (ml + plot_w) << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << (ml - 8) << "\" y=\"" << (y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << (mt + plot_h)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << (mt + plot_h) << "\" x2=\"" << (ml + plot_w) << "\" y2=\""
      << (mt + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (ml + plot_w / 2) << "\" y=\"" << (height - 14)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">iteration</text>\n";
  svg << "<text x=\"18\" y=\"" << (mt + plot_h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " << (mt + plot_h / 2)
      << ")\" text-anchor=\"middle\">A-norm of error</text>\n";

  int color = 0;
  double legend_y = mt + 10;
  for (const MethodHistory& h : report.histories) {
    const char* stroke = kPalette[color % 10];
    std::ostringstream pts;
    for (std::size_t k = 0; k < h.error_a_norm.size(); ++k) {
      if (h.error_a_norm[k] <= 0.0) continue;
      pts << x_of(k) << "," << y_of(std::log10(h.error_a_norm[k])) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\" "
        << (h.method == "bound" ? "stroke-dasharray=\"6 4\" " : "") << "points=\"" << pts.str() << "\"/>\n";
    std::string name = h.method;
    if (!h.variant.empty()) name += " (" + h.variant + ")";
    svg << "<line x1=\"" << (width - mr + 12) << "\" y1=\"" << legend_y << "\" x2=\"" << (width - mr + 40)
        << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << (width - mr + 46) << "\" y=\"" << (legend_y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
    legend_y += 18;
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string report_audit_text(const RunReport& report) {
  std::ostringstream out;
  const ExperimentConfig& cfg = report.config;
  out << "experiment: " << to_string(cfg.id) << "\n";
  out << "n: " << cfg.n << "\nkappa_max: " << format_short(cfg.kappa_max) << "\nseed: " << cfg.seed
      << "\niterations: " << cfg.iterations << "\n";
  if (!cfg.eta_list.empty()) {
    out << "eta:";
    for (double e : cfg.eta_list) out << " " << format_short(e);
    out << "\n";
  }
  if (cfg.id == ExperimentId::fig3) out << "coarse_count: " << cfg.coarse_count << "\n";
  out << "\nruns:\n";
  for (const MethodHistory& h : report.histories) {
    out << "  " << h.method << (h.variant.empty() ? "" : " (" + h.variant + ")") << ": steps="
        << (h.error_a_norm.empty() ? 0 : h.error_a_norm.size() - 1) << " termination="
        << to_string(h.termination) << " wall=" << format_short(h.wall_seconds) << "s";
    if (h.iterations_to_tolerance >= 0) out << " iters_to_1e-8=" << h.iterations_to_tolerance;
    out << "\n";
  }
  if (!report.audits.empty()) {
    out << "\naudit summaries (module thresholds: transition 1e-10, orthogonality 1e-9, sd identity 1e-10):\n";
    for (const AuditSummary& s : report.audits) {
      out << "  " << s.run << ": transition=" << format_short(s.error_transition)
          << " dir_orth=" << format_short(s.direction_orthogonality)
          << " err_orth=" << format_short(s.error_orthogonality);
      if (s.sd_identity >= 0.0) out << " sd_identity=" << format_short(s.sd_identity);
      out << " envelope=" << (s.envelope_ok ? "ok" : "VIOLATED");
      const bool flagged = s.error_transition > 1e-10 || s.direction_orthogonality > 1e-9 ||
                           s.error_orthogonality > 1e-9 || (s.sd_identity > 1e-10) || !s.envelope_ok;
      out << (flagged ? "  [FLAG]" : "") << "\n";
    }
  }
  if (!report.failures.empty()) {
    out << "\nfailures:\n";
    for (const std::string& f : report.failures) out << "  " << f << "\n";
  }
  return out.str();
}

std::vector<std::string> emit_report(const RunReport& report) {
  std::vector<std::string> paths;
  const ExperimentConfig& cfg = report.config;
  if (!cfg.emit_csv && !cfg.emit_svg && !cfg.emit_audit) return paths;

  std::filesystem::create_directories(cfg.out_dir);
  auto write_file = [&](const std::string& name, const std::string& content) {
    const std::string path = cfg.out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("emit_report: write failed for '" + path + "'");
    paths.push_back(path);
  };

  if (cfg.emit_csv) {
    for (const MethodHistory& h : report.histories) {
      std::string name = to_string(cfg.id) + "_" + h.method;
      if (!h.variant.empty()) name += "_" + h.variant;
      write_file(name + ".csv", history_csv(report, h));
    }
  }
  if (cfg.emit_svg) write_file(to_string(cfg.id) + ".svg", report_svg(report));
  if (cfg.emit_audit) write_file(to_string(cfg.id) + "_audit.txt", report_audit_text(report));
  return paths;
}

}  // namespace flexkrylov
