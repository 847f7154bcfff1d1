#include "flexkrylov/inner_cg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

InnerCgPreconditioner::InnerCgPreconditioner(double eta, int cap_multiplier)
    : eta_(eta), cap_multiplier_(cap_multiplier) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("inner_cg: eta must lie in (0, 1)");
  if (cap_multiplier < 1) throw std::invalid_argument("inner_cg: cap multiplier must be >= 1");
}

std::string InnerCgPreconditioner::label() const {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "inner-cg(eta=%g)", eta_);
  return buf;
}

Vector InnerCgPreconditioner::apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) {
  if (!ctx.op) throw std::invalid_argument("inner_cg: context must carry the operator");
  const SymmetricOperator& a = *ctx.op;
  const int n = a.dimension();
  if (static_cast<int>(residual.size()) != n) throw std::invalid_argument("inner_cg: dimension mismatch");

  meta.label = label();
  const double target = eta_ * norm2(residual);
  Vector solution(n, 0.0);
  if (target == 0.0) {
    meta.inner_iterations = 0;
    return solution;  // zero residual, nothing to solve
  }

  Vector res = residual;  // recurred inner residual
  Vector p = res;
  double rr = dot(res, res);
  const long cap = static_cast<long>(cap_multiplier_) * n;
  int iterations = 0;
  while (true) {
    if (iterations >= cap)
      throw NumericalError("inner_cg: iteration cap " + std::to_string(cap) + " exceeded (eta = " +
                           std::to_string(eta_) + ")");
    const Vector ap = a.apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw NumericalError("inner_cg: operator not positive definite on the inner step");
    const double alpha = rr / pap;
    axpy(alpha, p, solution);
    axpy(-alpha, ap, res);
    ++iterations;
    // stopping uses the true residual, recomputed with a fresh product
    if (norm2(subtract(residual, a.apply(solution))) <= target) break;
    const double rr_next = dot(res, res);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (int i = 0; i < n; ++i) p[i] = res[i] + beta * p[i];
  }
  meta.inner_iterations = iterations;
  return solution;
}

std::unique_ptr<Preconditioner> inner_cg(double eta) { return std::make_unique<InnerCgPreconditioner>(eta); }

}  // namespace flexkrylov
