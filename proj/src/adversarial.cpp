#include "flexkrylov/adversarial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexkrylov/cone.hpp"
#include "flexkrylov/errors.hpp"
#include "flexkrylov/metric.hpp"

namespace flexkrylov {

AdversarialPreconditioner::AdversarialPreconditioner(double kappa_max, Splitmix64Rng rng)
    : kappa_max_(kappa_max), sin_target_(0.0), rng_(rng) {
  if (!(kappa_max > 1.0)) throw std::invalid_argument("adversarial: kappa_max must be > 1");
  sin_target_ = spectral_bound(kappa_max);
}

Vector AdversarialPreconditioner::apply(const Vector&, const StepContext& ctx, ApplyMeta& meta) {
  if (!ctx.op || !ctx.true_solution || !ctx.current_iterate)
    throw std::invalid_argument("adversarial: context must carry the operator, iterate, and true solution");
  const SymmetricOperator& a = *ctx.op;
  const int n = a.dimension();
  const int k = ctx.iteration;
  if (k >= n) throw NumericalError("adversarial: dimension exhausted (iteration count >= matrix size)");
  if (static_cast<int>(ctx.prior_directions.size()) < k)
    throw std::invalid_argument("adversarial: full direction history required in the context");

  Vector e = subtract(*ctx.true_solution, *ctx.current_iterate);
  const double e_a = a.a_norm(e);
  if (e_a == 0.0) throw NumericalError("adversarial: current error is zero");
  const Vector e_hat = scaled(e, 1.0 / e_a);
  const Vector a_e_hat = a.apply(e_hat);

  std::vector<Vector> ap(k);
  std::vector<double> pap(k);
  for (int l = 0; l < k; ++l) {
    ap[l] = a.apply(ctx.prior_directions[l]);
    pap[l] = dot(ctx.prior_directions[l], ap[l]);
  }

  Vector u_hat;
  bool found = false;
  for (int attempt = 0; attempt < 8 && !found; ++attempt) {
    Vector u = rng_.normal_vector(n);
    const double initial = a.a_norm(u);
    // two Gram-Schmidt passes against the history and the error direction
    for (int pass = 0; pass < 2; ++pass) {
      for (int l = 0; l < k; ++l) axpy(-dot(u, ap[l]) / pap[l], ctx.prior_directions[l], u);
      axpy(-dot(u, a_e_hat), e_hat, u);
    }
    const double remaining = a.a_norm(u);
    if (remaining > 1e-8 * initial) {
      u_hat = scaled(u, 1.0 / remaining);
      found = true;
    }
  }
  if (!found)
    throw NumericalError("adversarial: degenerate draw, no direction A-orthogonal to the history after 8 tries");

  const double cos_target = std::sqrt(1.0 - sin_target_ * sin_target_);
  Vector s = scaled(e_hat, cos_target);
  axpy(sin_target_, u_hat, s);
  meta.label = label();
  meta.kappa_estimate = kappa_max_;
  return s;
}

std::unique_ptr<Preconditioner> adversarial(double kappa_max, Splitmix64Rng rng) {
  return std::make_unique<AdversarialPreconditioner>(kappa_max, rng);
}

DenseMatrix materialize_adversarial_binv(const SymmetricOperator& a, const Vector& error_direction,
                                         const Vector& preconditioned_direction) {
  const int n = a.dimension();
  const Metric metric = Metric::induced(a);
  const SpdMapResult cone_map = construct_spd_map(metric, error_direction, preconditioned_direction);

  // B^{-1} = C A^{-1}, column by column through a dense Cholesky of A
  const DenseCholesky chol(a.dense_view());
  DenseMatrix binv(n, n);
  Vector unit(n, 0.0);
  for (int j = 0; j < n; ++j) {
    unit[j] = 1.0;
    const Vector column = cone_map.map.apply(chol.solve(unit));
    for (int i = 0; i < n; ++i) binv(i, j) = column[i];
    unit[j] = 0.0;
  }
  return binv;
}

}  // namespace flexkrylov
