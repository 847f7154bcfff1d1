// Test-only preconditioner: returns directions drawn from the interior of the
// cone around the current error, sin angle = fraction * spectral_bound with a
// random fraction per step. Realizes an SPD preconditioner of condition
// number (1 + sin)/(1 - sin) <= kappa_max without materializing it.
#pragma once

#include <cmath>
#include <stdexcept>

#include "flexkrylov/cone.hpp"
#include "flexkrylov/preconditioner.hpp"
#include "flexkrylov/rng.hpp"

namespace testsupport {

using flexkrylov::ApplyMeta;
using flexkrylov::Splitmix64Rng;
using flexkrylov::StepContext;
using flexkrylov::Vector;

class ConeInteriorPreconditioner final : public flexkrylov::Preconditioner {
 public:
  ConeInteriorPreconditioner(double kappa_max, Splitmix64Rng rng, double fraction_lo = 0.1,
                             double fraction_hi = 0.95)
      : kappa_max_(kappa_max), lo_(fraction_lo), hi_(fraction_hi), rng_(rng) {
    if (!(kappa_max >= 1.0)) throw std::invalid_argument("cone interior: kappa_max must be >= 1");
  }

  Vector apply(const Vector&, const StepContext& ctx, ApplyMeta& meta) override {
    if (!ctx.op || !ctx.true_solution || !ctx.current_iterate)
      throw std::invalid_argument("cone interior: context must carry operator, iterate, true solution");
    const auto& a = *ctx.op;
    Vector e = flexkrylov::subtract(*ctx.true_solution, *ctx.current_iterate);
    const double e_a = a.a_norm(e);
    if (e_a == 0.0) throw flexkrylov::NumericalError("cone interior: zero error");
    Vector e_hat = flexkrylov::scaled(e, 1.0 / e_a);
    const Vector a_e_hat = a.apply(e_hat);

    Vector u = rng_.normal_vector(e.size());
    for (int pass = 0; pass < 2; ++pass) flexkrylov::axpy(-flexkrylov::dot(u, a_e_hat), e_hat, u);
    const double u_a = a.a_norm(u);
    if (u_a == 0.0) throw flexkrylov::NumericalError("cone interior: degenerate draw");
    flexkrylov::scale_in_place(u, 1.0 / u_a);

    const double fraction = lo_ + (hi_ - lo_) * rng_.uniform01();
    const double s = fraction * flexkrylov::spectral_bound(kappa_max_);
    const double c = std::sqrt(1.0 - s * s);
    Vector out = flexkrylov::scaled(e_hat, c);
    flexkrylov::axpy(s, u, out);
    meta.label = label();
    meta.kappa_estimate = (1.0 + s) / (1.0 - s);  // the realized map's condition number
    return out;
  }

  std::string label() const override { return "cone-interior"; }

 private:
  double kappa_max_;
  double lo_, hi_;
  Splitmix64Rng rng_;
};

}  // namespace testsupport
