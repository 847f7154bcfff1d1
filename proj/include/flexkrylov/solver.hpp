#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexkrylov/memory_policy.hpp"
#include "flexkrylov/operator.hpp"
#include "flexkrylov/preconditioner.hpp"
#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

struct StoppingRule {
  int max_iterations = 100;
  /// Relative A-norm error target, |e_k|_A <= tol |e_0|_A; needs the true solution.
  std::optional<double> error_tolerance;
  /// Relative Euclidean residual target, |r_k| <= tol |r_0|.
  std::optional<double> residual_tolerance;
};

enum class TerminationReason {
  max_iterations,
  residual_tolerance,
  error_tolerance,
  breakdown,       // |p_k|_A^2 <= eps_mach |s_k|_A^2, iterate already converged
  exact_solution,  // residual exactly zero
};

std::string to_string(TerminationReason r);

struct TraceOptions {
  /// Iterations whose full vectors (iterates, residuals, preconditioned
  /// residuals) are retained for audits. Directions are always retained.
  int history_cap = 512;
  bool keep_full_history = true;
};

/// Per-iteration record of a solve. Index k runs over executed steps;
/// `iterates` has one extra leading entry for x_0, and `error_a_norm` (when
/// the true solution is known) likewise covers 0..steps.
struct SolveTrace {
  std::vector<Vector> iterates;        // x_0 .. x_K (subject to history options)
  std::vector<Vector> residuals;       // r_0 .. r_{K-1}
  std::vector<Vector> preconditioned;  // s_0 .. s_{K-1}
  std::vector<Vector> directions;      // p_0 .. p_{K-1}
  std::vector<double> step_alpha;
  std::vector<double> step_beta;       // Algorithm 1 only, empty otherwise
  std::vector<int> ortho_window;       // m_k enforced at step k
  std::vector<ApplyMeta> precond_meta;
  std::vector<double> residual_norm;   // |r_k|, k = 0..K-1
  std::vector<double> error_a_norm;    // |e_k|_A, k = 0..K (empty without x_true)
  std::vector<double> reduction;       // |e_{k+1}|_A / |e_k|_A, k = 0..K-1
  /// Whether (e_{k+1}, s_k)_A = 0 is part of this trace's contract. True for
  /// the flexible method and Algorithm 1 with the modified beta; false for
  /// the standard beta, which only guarantees the line-search orthogonality.
  bool check_s_error_orthogonality = true;
  TerminationReason termination = TerminationReason::max_iterations;
  bool history_truncated = false;

  int steps() const { return static_cast<int>(step_alpha.size()); }
};

/// The generalized preconditioned iteration: r_k = b - A x_k fresh each step,
/// s_k = B_k^{-1} r_k, p_k = s_k Gram-Schmidt A-orthogonalized against the
/// last m_k directions, x_{k+1} = x_k + ((r_k, p_k)/(A p_k, p_k)) p_k.
SolveTrace solve_flexible(const SymmetricOperator& a, const Vector& b, const Vector& x0,
                          Preconditioner& precond, const MemoryPolicy& policy, const StoppingRule& stop,
                          const Vector* true_solution = nullptr, const TraceOptions& topts = {});

enum class BetaFormula { standard, modified };

struct AlgOneOptions {
  /// Recompute r_k = b - A x_k every this many steps; the recurred residual
  /// drifts away from the true one as the error shrinks. <= 0 disables.
  int residual_refresh_interval = 50;
  TraceOptions trace;
};

/// The practical PCG recurrence: p_k = s_k + beta_k p_{k-1} with beta either
/// (s_k, r_k)/(s_{k-1}, r_{k-1}) [standard] or
/// (s_k, r_k - r_{k-1})/(s_{k-1},r_{k-1}) [modified], alpha_k =
/// (s_k, r_k)/(p_k, A p_k), and the recurred residual r_{k+1} = r_k - alpha_k A p_k.
SolveTrace solve_alg1(const SymmetricOperator& a, const Vector& b, const Vector& x0, Preconditioner& precond,
                      BetaFormula beta_formula, const StoppingRule& stop,
                      const Vector* true_solution = nullptr, const AlgOneOptions& opts = {});

}  // namespace flexkrylov
