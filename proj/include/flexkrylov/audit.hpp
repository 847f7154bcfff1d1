#pragma once

#include <optional>

#include "flexkrylov/operator.hpp"
#include "flexkrylov/solver.hpp"

namespace flexkrylov {

/// Error propagation identity: e_{k+1} = e_k - ((A e_k, p_k)/(A p_k, p_k)) p_k.
/// Returns the maximum over recorded steps of the Euclidean residual of the
/// identity, normalized by |e_k|. Requires full trace history.
double audit_error_transition(const SolveTrace& trace, const SymmetricOperator& a, const Vector& true_solution);

struct OrthogonalityReport {
  /// max over steps k and window pairs k-m_k <= i < j <= k of
  /// |(p_i, p_j)_A| / (|p_i|_A |p_j|_A)
  double max_direction_residual = 0.0;
  /// max over steps of |(e_{k+1}, p_i)_A| / (|e_{k+1}|_A |p_i|_A) for i in the
  /// window plus (when the trace contracts it) the same quantity with s_k
  double max_error_residual = 0.0;
};

/// Checks the A-orthogonality relations maintained by the iteration. The
/// error part runs only when the true solution is supplied.
OrthogonalityReport audit_orthogonality(const SolveTrace& trace, const SymmetricOperator& a,
                                        const Vector* true_solution = nullptr);

struct LocalOptimalityReport {
  /// | |e_{k+1}|_A - min over the step subspace | / |e_k|_A, the minimum
  /// computed brute force from the normal equations in the A-inner product
  double relative_gap = 0.0;
  /// columns kept by the pivoted elimination
  int rank = 0;
  /// two-parameter minimum over span{s_k, e_k - e_{k-1}} (k > 0 only)
  std::optional<double> two_param_min;
  /// minimizing coefficient of e_k - e_{k-1}
  std::optional<double> two_param_beta;
  /// |e_{k+1}|_A <= two_param_min + 1e-10
  bool within_two_param = true;
};

/// Local A-optimality of step k: the achieved |e_{k+1}|_A against the
/// brute-force minimum of |e_k - p|_A over span{s_k, p_{k-m_k}, ..., p_{k-1}}.
LocalOptimalityReport audit_local_optimality(const SolveTrace& trace, int step, const SymmetricOperator& a,
                                             const Vector& true_solution);

/// Steepest-descent reduction identity: on a trace with m_k = 0 throughout,
/// |e_{k+1}|_A / |e_k|_A = sin of the A-angle between e_k and s_k. Returns the
/// maximum absolute deviation over steps.
double audit_sd_reduction(const SolveTrace& trace, const SymmetricOperator& a, const Vector& true_solution);

}  // namespace flexkrylov
