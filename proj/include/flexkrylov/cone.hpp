#pragma once

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/metric.hpp"

namespace flexkrylov {

/// Classification slack for floating-point boundary cases of the cone.
inline constexpr double kConeBoundarySlack = 1e-12;

/// (kappa_max - 1) / (kappa_max + 1), the worst-case per-step error reduction
/// of preconditioned steepest descent and the sine of the cone half-opening.
double spectral_bound(double kappa_max);

struct SpdMapResult {
  DenseMatrix map;     // self-adjoint positive definite in the given metric
  double achieved_sin; // sin of the metric angle between x and y
  double kappa;        // (1 + achieved_sin) / (1 - achieved_sin)
};

/// Builds a map C, self-adjoint and positive definite in the metric, with
/// C x parallel to y and condition number (1 + sin a)/(1 - sin a) where
/// a is the metric angle between x and y. Requires a in [0, pi/2): y is first
/// rescaled to the metric projection of x onto span{y}, then C = I + sin(a) H
/// for a reflection H (self-adjoint in the metric, eigenvalues +-1) taking
/// sin(a) x to y - x. For a = 0 the identity is returned.
SpdMapResult construct_spd_map(const Metric& metric, const Vector& x, const Vector& y);

/// True iff y lies in the pointed circular cone around x of SPD images with
/// condition number at most kappa_max: sin of the metric angle <= the
/// spectral bound (plus the boundary slack) and the angle is acute.
bool cone_membership(const Metric& metric, const Vector& x, const Vector& y, double kappa_max);

}  // namespace flexkrylov
