#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

using Vector = std::vector<double>;

inline double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// y += a * x
inline void axpy(double a, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale_in_place(Vector& x, double a) {
  for (double& v : x) v *= a;
}

inline Vector scaled(const Vector& x, double a) {
  Vector y = x;
  scale_in_place(y, a);
  return y;
}

inline Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  Vector c = a;
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

inline Vector subtract(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("subtract: dimension mismatch");
  Vector c = a;
  for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  return c;
}

inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

inline bool all_finite(const Vector& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void ensure_finite(const Vector& x, const char* what) {
  if (!all_finite(x)) throw NumericalError(std::string(what) + ": non-finite entries");
}

}  // namespace flexkrylov
