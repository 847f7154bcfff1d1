#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flexkrylov/operator.hpp"
#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

/// Inner-product geometry: either Euclidean or (x, y)_M = (x, M y) induced by
/// an SPD operator. Induced metrics hold a non-owning pointer; the operator
/// must outlive the metric.
class Metric {
 public:
  static Metric euclidean() { return Metric(nullptr); }
  static Metric induced(const SymmetricOperator& m) { return Metric(&m); }

  bool is_euclidean() const { return op_ == nullptr; }
  /// 0 means "any dimension" (Euclidean).
  int dimension() const { return op_ ? op_->dimension() : 0; }

  Vector apply(const Vector& v) const { return op_ ? op_->apply(v) : v; }

  double inner(const Vector& x, const Vector& y) const {
    if (x.size() != y.size()) throw std::invalid_argument("Metric::inner: dimension mismatch");
    if (op_) {
      if (static_cast<int>(x.size()) != op_->dimension())
        throw std::invalid_argument("Metric::inner: dimension mismatch with metric operator");
      return dot(x, op_->apply(y));
    }
    return dot(x, y);
  }

  double norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

  /// Metric cosine of the angle, clamped to [-1, 1]; throws on zero vectors.
  double cosine(const Vector& x, const Vector& y) const {
    const double nx = norm(x);
    const double ny = norm(y);
    if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("Metric::cosine: zero vector");
    return std::clamp(inner(x, y) / (nx * ny), -1.0, 1.0);
  }

 private:
  explicit Metric(const SymmetricOperator* op) : op_(op) {}
  const SymmetricOperator* op_;
};

/// (x, M y); plain dot product for the Euclidean metric.
inline double weighted_inner(const Metric& metric, const Vector& x, const Vector& y) {
  return metric.inner(x, y);
}

/// Angle in [0, pi] with the cosine clamped before arccos.
inline double angle(const Metric& metric, const Vector& x, const Vector& y) {
  return std::acos(metric.cosine(x, y));
}

/// sin of the metric angle, computed from the clamped cosine.
inline double sine_of_angle(const Metric& metric, const Vector& x, const Vector& y) {
  const double c = metric.cosine(x, y);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace flexkrylov
