#include "flexkrylov/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

namespace {

// Lemma 3.2 guarantees p_k != 0 before convergence in exact arithmetic;
// floating point needs a cutoff.
constexpr double kBreakdownEps = 0x1p-52;

void check_inputs(const SymmetricOperator& a, const Vector& b, const Vector& x0, const StoppingRule& stop,
                  const Vector* true_solution, const char* who) {
  const int n = a.dimension();
  if (static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (stop.max_iterations < 1) throw std::invalid_argument(std::string(who) + ": max_iterations must be >= 1");
  if (true_solution && static_cast<int>(true_solution->size()) != n)
    throw std::invalid_argument(std::string(who) + ": true solution dimension mismatch");
}

double error_a_norm_of(const SymmetricOperator& a, const Vector& x_true, const Vector& x) {
  return a.a_norm(subtract(x_true, x));
}

}  // namespace

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::max_iterations:
      return "max-iterations";
    case TerminationReason::residual_tolerance:
      return "residual-tolerance";
    case TerminationReason::error_tolerance:
      return "error-tolerance";
    case TerminationReason::breakdown:
      return "breakdown";
    case TerminationReason::exact_solution:
      return "exact-solution";
  }
  return "?";
}

SolveTrace solve_flexible(const SymmetricOperator& a, const Vector& b, const Vector& x0,
                          Preconditioner& precond, const MemoryPolicy& policy, const StoppingRule& stop,
                          const Vector* true_solution, const TraceOptions& topts) {
  check_inputs(a, b, x0, stop, true_solution, "solve_flexible");
  if (const PolicyValidation v = validate_policy(policy, stop.max_iterations); !v.ok)
    throw std::invalid_argument("solve_flexible: inadmissible memory policy: " + v.message);

  SolveTrace trace;
  Vector x = x0;
  if (topts.keep_full_history) trace.iterates.push_back(x);
  if (true_solution) trace.error_a_norm.push_back(error_a_norm_of(a, *true_solution, x));

  std::vector<double> ap_dot_p;  // (A p_l, p_l) for the window coefficients
  double r0_norm = -1.0;

  for (int k = 0; k < stop.max_iterations; ++k) {
    Vector r = subtract(b, a.apply(x));
    ensure_finite(r, "solve_flexible residual");
    const double rn = norm2(r);
    if (k == 0) r0_norm = rn;
    if (rn == 0.0) {
      trace.termination = TerminationReason::exact_solution;
      return trace;
    }
    if (stop.residual_tolerance && rn <= *stop.residual_tolerance * r0_norm) {
      trace.termination = TerminationReason::residual_tolerance;
      return trace;
    }
    if (stop.error_tolerance && true_solution &&
        trace.error_a_norm[k] <= *stop.error_tolerance * trace.error_a_norm[0]) {
      trace.termination = TerminationReason::error_tolerance;
      return trace;
    }

    StepContext ctx;
    ctx.iteration = k;
    ctx.op = &a;
    ctx.prior_directions = std::span<const Vector>(trace.directions);
    ctx.current_iterate = &x;
    ctx.true_solution = true_solution;
    ApplyMeta meta;
    Vector s = precond.apply(r, ctx, meta);
    if (s.size() != r.size()) throw NumericalError("solve_flexible: preconditioner returned wrong dimension");
    ensure_finite(s, "solve_flexible preconditioned residual");
    if (!(dot(s, r) > 0.0))
      throw NumericalError("solve_flexible: preconditioner not SPD on this step ((s_k, r_k) <= 0 at k = " +
                           std::to_string(k) + ")");

    const int m = policy.window(k);
    if (m > 0 && trace.history_truncated)
      throw std::invalid_argument("solve_flexible: history cap " + std::to_string(topts.history_cap) +
                                  " too small for the policy window at k = " + std::to_string(k));

    const Vector as = a.apply(s);
    Vector p = s;
    for (int l = k - m; l <= k - 1; ++l) {
      const double coef = dot(as, trace.directions[l]) / ap_dot_p[l];
      axpy(-coef, trace.directions[l], p);
    }
    const Vector ap = a.apply(p);
    const double p_a2 = dot(ap, p);
    const double s_a2 = dot(as, s);
    if (!(p_a2 > kBreakdownEps * s_a2)) {
      trace.termination = TerminationReason::breakdown;
      return trace;
    }

    const double alpha = dot(r, p) / p_a2;
    axpy(alpha, p, x);
    ensure_finite(x, "solve_flexible iterate");

    trace.step_alpha.push_back(alpha);
    trace.ortho_window.push_back(m);
    trace.precond_meta.push_back(std::move(meta));
    trace.residual_norm.push_back(rn);
    if (static_cast<int>(trace.directions.size()) < topts.history_cap) {
      trace.directions.push_back(std::move(p));
      ap_dot_p.push_back(p_a2);
    } else {
      trace.history_truncated = true;
    }
    if (topts.keep_full_history && !trace.history_truncated) {
      trace.residuals.push_back(std::move(r));
      trace.preconditioned.push_back(std::move(s));
      trace.iterates.push_back(x);
    }
    if (true_solution) {
      const double e_next = error_a_norm_of(a, *true_solution, x);
      const double e_prev = trace.error_a_norm.back();
      trace.error_a_norm.push_back(e_next);
      trace.reduction.push_back(e_prev > 0.0 ? e_next / e_prev : 0.0);
    }
  }
  trace.termination = TerminationReason::max_iterations;
  return trace;
}

SolveTrace solve_alg1(const SymmetricOperator& a, const Vector& b, const Vector& x0, Preconditioner& precond,
                      BetaFormula beta_formula, const StoppingRule& stop, const Vector* true_solution,
                      const AlgOneOptions& opts) {
  check_inputs(a, b, x0, stop, true_solution, "solve_alg1");

  SolveTrace trace;
  trace.check_s_error_orthogonality = (beta_formula == BetaFormula::modified);

  Vector x = x0;
  if (opts.trace.keep_full_history) trace.iterates.push_back(x);
  if (true_solution) trace.error_a_norm.push_back(error_a_norm_of(a, *true_solution, x));

  Vector r = subtract(b, a.apply(x));
  double r0_norm = norm2(r);
  Vector p;        // current direction
  Vector r_prev;   // residual of the previous step, for the modified beta
  double sr_prev = 0.0;

  for (int k = 0; k < stop.max_iterations; ++k) {
    if (opts.residual_refresh_interval > 0 && k > 0 && k % opts.residual_refresh_interval == 0)
      r = subtract(b, a.apply(x));
    ensure_finite(r, "solve_alg1 residual");
    const double rn = norm2(r);
    if (rn == 0.0) {
      trace.termination = TerminationReason::exact_solution;
      return trace;
    }
    if (stop.residual_tolerance && rn <= *stop.residual_tolerance * r0_norm) {
      trace.termination = TerminationReason::residual_tolerance;
      return trace;
    }
    if (stop.error_tolerance && true_solution &&
        trace.error_a_norm[k] <= *stop.error_tolerance * trace.error_a_norm[0]) {
      trace.termination = TerminationReason::error_tolerance;
      return trace;
    }

    StepContext ctx;
    ctx.iteration = k;
    ctx.op = &a;
    ctx.prior_directions = std::span<const Vector>(trace.directions);
    ctx.current_iterate = &x;
    ctx.true_solution = true_solution;
    ApplyMeta meta;
    Vector s = precond.apply(r, ctx, meta);
    if (s.size() != r.size()) throw NumericalError("solve_alg1: preconditioner returned wrong dimension");
    ensure_finite(s, "solve_alg1 preconditioned residual");
    const double sr = dot(s, r);
    if (!(sr > 0.0))
      throw NumericalError("solve_alg1: preconditioner not SPD on this step ((s_k, r_k) <= 0 at k = " +
                           std::to_string(k) + ")");

    double beta = 0.0;
    if (k == 0) {
      p = s;
    } else {
      beta = (beta_formula == BetaFormula::standard) ? sr / sr_prev : (sr - dot(s, r_prev)) / sr_prev;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] + beta * p[i];
    }

    const Vector ap = a.apply(p);
    const double pap = dot(p, ap);
    if (!std::isfinite(pap) || pap < 0.0)
      throw NumericalError("solve_alg1: breakdown, (p_k, A p_k) = " + std::to_string(pap) + " at k = " +
                           std::to_string(k));
    const double s_a2 = a.a_inner(s, s);
    if (!(pap > kBreakdownEps * s_a2)) {
      trace.termination = TerminationReason::breakdown;
      return trace;
    }

    const double alpha = sr / pap;
    axpy(alpha, p, x);
    ensure_finite(x, "solve_alg1 iterate");
    r_prev = r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * ap[i];
    sr_prev = sr;

    trace.step_alpha.push_back(alpha);
    trace.step_beta.push_back(beta);
    // the modified beta realizes the m_k = min(k, 1) window; the standard
    // beta maintains only the line-search orthogonality (e_{k+1}, p_k)_A = 0
    trace.ortho_window.push_back(beta_formula == BetaFormula::modified ? std::min(k, 1) : 0);
    trace.precond_meta.push_back(std::move(meta));
    trace.residual_norm.push_back(rn);
    if (static_cast<int>(trace.directions.size()) < opts.trace.history_cap) {
      trace.directions.push_back(p);
    } else {
      trace.history_truncated = true;
    }
    if (opts.trace.keep_full_history && !trace.history_truncated) {
      trace.residuals.push_back(r_prev);
      trace.preconditioned.push_back(std::move(s));
      trace.iterates.push_back(x);
    }
    if (true_solution) {
      const double e_next = error_a_norm_of(a, *true_solution, x);
      const double e_prev = trace.error_a_norm.back();
      trace.error_a_norm.push_back(e_next);
      trace.reduction.push_back(e_prev > 0.0 ? e_next / e_prev : 0.0);
    }
  }
  trace.termination = TerminationReason::max_iterations;
  return trace;
}

}  // namespace flexkrylov
