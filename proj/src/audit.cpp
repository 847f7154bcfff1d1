#include "flexkrylov/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "flexkrylov/metric.hpp"

namespace flexkrylov {

namespace {

void require_history(const SolveTrace& trace, const char* who) {
  const int k = trace.steps();
  if (trace.history_truncated || static_cast<int>(trace.iterates.size()) != k + 1 ||
      static_cast<int>(trace.directions.size()) != k || static_cast<int>(trace.preconditioned.size()) != k)
    throw std::invalid_argument(std::string(who) + ": trace does not retain the full history");
}

struct GramSolve {
  double quadratic = 0.0;       // c^T G^+ c over the kept columns
  std::vector<double> coeffs;   // minimizer coefficients, 0 for dropped columns
  int rank = 0;
};

// Pivoted Cholesky on the Gram matrix, dropping numerically dependent columns.
GramSolve solve_gram_pivoted(const std::vector<std::vector<double>>& g, const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, g[i][i]);
  const double drop_tol = 1e-13 * max_diag;

  int rank = 0;
  for (int k = 0; k < n; ++k) {
    int best = -1;
    double best_value = drop_tol;
    for (int j = k; j < n; ++j) {
      double d = g[perm[j]][perm[j]];
      for (int t = 0; t < k; ++t) d -= l[j][t] * l[j][t];
      if (d > best_value) {
        best_value = d;
        best = j;
      }
    }
    if (best < 0) break;
    std::swap(perm[k], perm[best]);
    std::swap(l[k], l[best]);
    l[k][k] = std::sqrt(best_value);
    for (int i = k + 1; i < n; ++i) {
      double s = g[perm[i]][perm[k]];
      for (int t = 0; t < k; ++t) s -= l[i][t] * l[k][t];
      l[i][k] = s / l[k][k];
    }
    ++rank;
  }

  std::vector<double> y(rank);
  for (int i = 0; i < rank; ++i) {
    double s = c[perm[i]];
    for (int t = 0; t < i; ++t) s -= l[i][t] * y[t];
    y[i] = s / l[i][i];
  }
  GramSolve out;
  out.rank = rank;
  for (double v : y) out.quadratic += v * v;
  std::vector<double> w(rank);
  for (int i = rank - 1; i >= 0; --i) {
    double s = y[i];
    for (int t = i + 1; t < rank; ++t) s -= l[t][i] * w[t];
    w[i] = s / l[i][i];
  }
  out.coeffs.assign(n, 0.0);
  for (int i = 0; i < rank; ++i) out.coeffs[perm[i]] = w[i];
  return out;
}

}  // namespace

double audit_error_transition(const SolveTrace& trace, const SymmetricOperator& a, const Vector& true_solution) {
  require_history(trace, "audit_error_transition");
  double worst = 0.0;
  for (int k = 0; k < trace.steps(); ++k) {
    const Vector e_k = subtract(true_solution, trace.iterates[k]);
    const double en = norm2(e_k);
    if (en == 0.0) continue;
    const Vector e_next = subtract(true_solution, trace.iterates[k + 1]);
    const Vector& p = trace.directions[k];
    const Vector ap = a.apply(p);
    const double coef = dot(e_k, ap) / dot(p, ap);
    Vector predicted = e_k;
    axpy(-coef, p, predicted);
    worst = std::max(worst, norm2(subtract(e_next, predicted)) / en);
  }
  return worst;
}

OrthogonalityReport audit_orthogonality(const SolveTrace& trace, const SymmetricOperator& a,
                                        const Vector* true_solution) {
  require_history(trace, "audit_orthogonality");
  OrthogonalityReport report;
  const int steps = trace.steps();
  if (steps == 0) return report;

  std::vector<Vector> ap(steps);
  std::vector<double> p_a_norm(steps);
  for (int i = 0; i < steps; ++i) {
    ap[i] = a.apply(trace.directions[i]);
    p_a_norm[i] = std::sqrt(std::max(0.0, dot(trace.directions[i], ap[i])));
  }

  for (int k = 0; k < steps; ++k) {
    const int lo = k - trace.ortho_window[k];
    for (int i = lo; i < k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        const double denom = p_a_norm[i] * p_a_norm[j];
        if (denom == 0.0) continue;
        report.max_direction_residual =
            std::max(report.max_direction_residual, std::abs(dot(trace.directions[i], ap[j])) / denom);
      }
    if (true_solution) {
      const Vector e_next = subtract(*true_solution, trace.iterates[k + 1]);
      const double en = a.a_norm(e_next);
      if (en == 0.0) continue;
      for (int i = lo; i <= k; ++i) {
        if (p_a_norm[i] == 0.0) continue;
        report.max_error_residual =
            std::max(report.max_error_residual, std::abs(dot(e_next, ap[i])) / (en * p_a_norm[i]));
      }
      if (trace.check_s_error_orthogonality) {
        const Vector& s = trace.preconditioned[k];
        const double sn = a.a_norm(s);
        if (sn > 0.0)
          report.max_error_residual =
              std::max(report.max_error_residual, std::abs(a.a_inner(e_next, s)) / (en * sn));
      }
    }
  }
  return report;
}

LocalOptimalityReport audit_local_optimality(const SolveTrace& trace, int step, const SymmetricOperator& a,
                                             const Vector& true_solution) {
  require_history(trace, "audit_local_optimality");
  if (step < 0 || step >= trace.steps()) throw std::invalid_argument("audit_local_optimality: step out of range");

  const Vector e_k = subtract(true_solution, trace.iterates[step]);
  const double e_a2 = a.a_inner(e_k, e_k);
  const double e_a = std::sqrt(std::max(0.0, e_a2));
  const double e_next_a = a.a_norm(subtract(true_solution, trace.iterates[step + 1]));

  LocalOptimalityReport report;
  if (e_a == 0.0) return report;

  // basis of the step subspace: s_k then the window directions
  std::vector<const Vector*> basis;
  basis.push_back(&trace.preconditioned[step]);
  for (int l = step - trace.ortho_window[step]; l <= step - 1; ++l) basis.push_back(&trace.directions[l]);

  const int nb = static_cast<int>(basis.size());
  std::vector<Vector> a_basis(nb);
  for (int i = 0; i < nb; ++i) a_basis[i] = a.apply(*basis[i]);
  std::vector<std::vector<double>> gram(nb, std::vector<double>(nb));
  std::vector<double> rhs(nb);
  for (int i = 0; i < nb; ++i) {
    rhs[i] = dot(e_k, a_basis[i]);
    for (int j = 0; j < nb; ++j) gram[i][j] = dot(*basis[i], a_basis[j]);
  }
  const GramSolve full = solve_gram_pivoted(gram, rhs);
  report.rank = full.rank;
  const double minimum = std::sqrt(std::max(0.0, e_a2 - full.quadratic));
  report.relative_gap = std::abs(e_next_a - minimum) / e_a;

  if (step > 0) {
    // two-parameter subspace span{s_k, e_k - e_{k-1}}
    const Vector diff = subtract(trace.iterates[step - 1], trace.iterates[step]);  // e_k - e_{k-1}
    const Vector& s = trace.preconditioned[step];
    const Vector a_s = a.apply(s);
    const Vector a_d = a.apply(diff);
    const std::vector<std::vector<double>> g2{{dot(s, a_s), dot(s, a_d)}, {dot(diff, a_s), dot(diff, a_d)}};
    const std::vector<double> c2{dot(e_k, a_s), dot(e_k, a_d)};
    const GramSolve two = solve_gram_pivoted(g2, c2);
    const double min2 = std::sqrt(std::max(0.0, e_a2 - two.quadratic));
    report.two_param_min = min2;
    report.two_param_beta = two.coeffs[1];
    report.within_two_param = e_next_a <= min2 + 1e-10;
  }
  return report;
}

double audit_sd_reduction(const SolveTrace& trace, const SymmetricOperator& a, const Vector& true_solution) {
  require_history(trace, "audit_sd_reduction");
  if (!trace.step_beta.empty())
    throw std::invalid_argument("audit_sd_reduction: not a steepest-descent trace (p_k couples to p_{k-1})");
  for (int m : trace.ortho_window)
    if (m != 0) throw std::invalid_argument("audit_sd_reduction: not a steepest-descent trace (m_k != 0)");
  const Metric metric = Metric::induced(a);
  double worst = 0.0;
  for (int k = 0; k < trace.steps(); ++k) {
    const Vector e_k = subtract(true_solution, trace.iterates[k]);
    const double e_a = metric.norm(e_k);
    if (e_a == 0.0) continue;
    const double e_next_a = metric.norm(subtract(true_solution, trace.iterates[k + 1]));
    const double ratio = e_next_a / e_a;
    const double s = sine_of_angle(metric, e_k, trace.preconditioned[k]);
    worst = std::max(worst, std::abs(ratio - s));
  }
  return worst;
}

}  // namespace flexkrylov
