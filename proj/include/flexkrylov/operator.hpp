#pragma once

#include <cmath>

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

/// SPD linear map y = A x. Matrix-free for the structured kinds; a dense copy
/// can be materialized for audits up to dimension 4000.
class SymmetricOperator {
 public:
  enum class Kind { dense, diagonal, tridiagonal_laplacian };

  /// Dense SPD operator; the matrix must be symmetric within 1e-12 relative.
  static SymmetricOperator dense(DenseMatrix m);
  /// diag(d) with strictly positive entries.
  static SymmetricOperator diagonal(Vector d);
  /// tridiag(-1, 2, -1), the 3-point 1-D Laplacian with Dirichlet ends.
  static SymmetricOperator laplacian_1d(int n);

  int dimension() const { return n_; }
  Kind kind() const { return kind_; }

  void apply(const Vector& x, Vector& y) const;
  Vector apply(const Vector& x) const;

  /// (x, A y)
  double a_inner(const Vector& x, const Vector& y) const { return dot(x, apply(y)); }
  double a_norm(const Vector& x) const { return std::sqrt(std::max(0.0, dot(x, apply(x)))); }

  /// Dense copy for audits; dimension capped at 4000.
  DenseMatrix dense_view() const;

  /// Main diagonal of the operator (no dense materialization needed).
  Vector diagonal_entries() const;

 private:
  SymmetricOperator() = default;
  Kind kind_ = Kind::dense;
  int n_ = 0;
  DenseMatrix dense_;
  Vector diag_;
};

}  // namespace flexkrylov
