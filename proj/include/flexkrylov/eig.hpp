#pragma once

#include <functional>
#include <vector>

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/operator.hpp"

namespace flexkrylov {

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // orthonormal columns, vectors.col(j) pairs with values[j]
};

/// Full eigendecomposition of a dense symmetric matrix by cyclic Jacobi
/// rotations. Input must be symmetric within 1e-12 relative and n <= 4000.
SymmetricEigen sym_eig(const DenseMatrix& m);

/// kappa(B^{-1} A) = lambda_max / lambda_min, computed by symmetrizing the
/// pencil in the A-inner product: the spectrum of B^{-1}A equals that of
/// A^{1/2} B^{-1} A^{1/2}. Dense audit path, n <= 2000. Throws NumericalError
/// with an indefiniteness diagnostic if the computed lambda_min <= 0.
double generalized_condition(const SymmetricOperator& a,
                             const std::function<Vector(const Vector&)>& apply_binv);

}  // namespace flexkrylov
