#pragma once

#include <memory>

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/preconditioner.hpp"
#include "flexkrylov/rng.hpp"

namespace flexkrylov {

/// Worst-case variable preconditioner: places each preconditioned residual on
/// the boundary of the cone around the current error, A-orthogonal to every
/// previous search direction, so any memory policy collapses to steepest
/// descent at the worst admissible rate (kappa_max - 1)/(kappa_max + 1).
///
/// Each application draws a random vector, A-orthogonalizes it against all
/// prior directions and the normalized error, and returns
/// cos(theta) e_hat + sin(theta) u_hat with sin(theta) equal to the spectral
/// bound. Requires the true solution, the current iterate, and the full
/// direction history in the step context, and more dimensions than steps.
class AdversarialPreconditioner final : public Preconditioner {
 public:
  AdversarialPreconditioner(double kappa_max, Splitmix64Rng rng);

  Vector apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) override;
  std::string label() const override { return "adversarial"; }

  double kappa_max() const { return kappa_max_; }

 private:
  double kappa_max_;
  double sin_target_;
  Splitmix64Rng rng_;
};

std::unique_ptr<Preconditioner> adversarial(double kappa_max, Splitmix64Rng rng);

/// Dense realization of the step's preconditioner inverse for audits:
/// B_k^{-1} = C A^{-1} where C is the Lemma-2.3 map in the A-inner product
/// taking the error direction to the preconditioned direction. By
/// construction kappa(B_k^{-1} A) = kappa(C) in the A geometry.
DenseMatrix materialize_adversarial_binv(const SymmetricOperator& a, const Vector& error_direction,
                                         const Vector& preconditioned_direction);

}  // namespace flexkrylov
