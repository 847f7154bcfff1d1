#include "flexkrylov/cone.hpp"

#include <cmath>
#include <stdexcept>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

double spectral_bound(double kappa_max) {
  if (!(kappa_max >= 1.0)) throw std::invalid_argument("spectral_bound: kappa_max must be >= 1");
  return (kappa_max - 1.0) / (kappa_max + 1.0);
}

SpdMapResult construct_spd_map(const Metric& metric, const Vector& x, const Vector& y) {
  const double cos_a = metric.cosine(x, y);  // throws on zero vectors
  if (!(cos_a > 0.0))
    throw std::invalid_argument("construct_spd_map: y is outside the open half-space of x (angle >= pi/2)");
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
  const int n = static_cast<int>(x.size());

  SpdMapResult out;
  out.achieved_sin = sin_a;
  out.kappa = (1.0 + sin_a) / (1.0 - sin_a);
  if (sin_a == 0.0) {
    // y parallel to x: the identity realizes the map, no reflector needed
    out.map = DenseMatrix::identity(n);
    return out;
  }

  // rescale y to the metric projection of x onto span{y}
  const Vector yp = scaled(y, metric.inner(x, y) / metric.inner(y, y));
  const Vector u = subtract(yp, x);       // metric length sin(a) |x|
  const Vector v = scaled(x, sin_a);      // same metric length
  Vector w = subtract(u, v);
  const double wn = metric.norm(w);
  if (wn == 0.0) throw NumericalError("construct_spd_map: degenerate reflector");
  scale_in_place(w, 1.0 / wn);
  const Vector mw = metric.apply(w);

  // H z = z - 2 (w, z)_M w maps v to u;  C = (1 + sin a) I - 2 sin a w (M w)^T
  DenseMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = -2.0 * sin_a * w[i] * mw[j];
    c(i, i) += 1.0 + sin_a;
  }
  out.map = std::move(c);
  return out;
}

bool cone_membership(const Metric& metric, const Vector& x, const Vector& y, double kappa_max) {
  const double bound = spectral_bound(kappa_max);
  const double cos_a = metric.cosine(x, y);  // throws on zero vectors
  if (!(cos_a > 0.0)) return false;
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
  return sin_a <= bound + kConeBoundarySlack;
}

}  // namespace flexkrylov
