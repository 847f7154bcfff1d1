#pragma once

#include <memory>

#include "flexkrylov/preconditioner.hpp"

namespace flexkrylov {

/// Inner-outer preconditioning: each application runs unpreconditioned CG on
/// A s = r from a zero initial guess and returns the first iterate whose TRUE
/// residual |r - A s| (a fresh product each inner step, not the recurred one)
/// drops below eta |r|. The inner iteration count is reported in the metadata.
class InnerCgPreconditioner final : public Preconditioner {
 public:
  explicit InnerCgPreconditioner(double eta, int cap_multiplier = 10);

  Vector apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) override;
  std::string label() const override;

  double eta() const { return eta_; }

 private:
  double eta_;
  int cap_multiplier_;
};

std::unique_ptr<Preconditioner> inner_cg(double eta);

}  // namespace flexkrylov
