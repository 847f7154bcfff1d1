#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "flexkrylov/operator.hpp"
#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

/// Per-application bookkeeping a preconditioner reports back to the solver.
struct ApplyMeta {
  std::string label;
  int inner_iterations = 0;
  std::optional<double> kappa_estimate;  // bound on kappa(B_k^{-1} A) when known
};

/// What the solver exposes to a preconditioner at step k. `prior_directions`
/// holds p_0, ..., p_{k-1}. `true_solution` is only populated when the caller
/// knows it (experiment setups); the adversarial construction requires it.
struct StepContext {
  int iteration = 0;
  const SymmetricOperator* op = nullptr;
  std::span<const Vector> prior_directions;
  const Vector* current_iterate = nullptr;
  const Vector* true_solution = nullptr;
};

/// A per-iteration mapping s_k = B_k^{-1} r_k. Implementations may be
/// stateful (randomized, history-dependent); a given instance must be owned
/// by a single solve at a time.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual Vector apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) = 0;
  virtual std::string label() const = 0;
};

/// Stateless wrapper around the action of a fixed SPD inverse.
class FixedSpdPreconditioner final : public Preconditioner {
 public:
  explicit FixedSpdPreconditioner(std::function<Vector(const Vector&)> solve, std::string label = "fixed")
      : solve_(std::move(solve)), label_(std::move(label)) {}

  Vector apply(const Vector& residual, const StepContext&, ApplyMeta& meta) override {
    meta.label = label_;
    return solve_(residual);
  }

  std::string label() const override { return label_; }

 private:
  std::function<Vector(const Vector&)> solve_;
  std::string label_;
};

inline std::unique_ptr<Preconditioner> fixed_spd(std::function<Vector(const Vector&)> solve,
                                                 std::string label = "fixed") {
  return std::make_unique<FixedSpdPreconditioner>(std::move(solve), std::move(label));
}

inline std::unique_ptr<Preconditioner> identity_preconditioner() {
  return fixed_spd([](const Vector& r) { return r; }, "identity");
}

/// B = diag(A).
inline std::unique_ptr<Preconditioner> jacobi_preconditioner(const SymmetricOperator& a) {
  Vector d = a.diagonal_entries();
  return fixed_spd(
      [d = std::move(d)](const Vector& r) {
        Vector s(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) s[i] = r[i] / d[i];
        return s;
      },
      "jacobi");
}

}  // namespace flexkrylov
