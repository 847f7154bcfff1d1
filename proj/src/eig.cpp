#include "flexkrylov/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen sym_eig(const DenseMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("sym_eig: matrix not square");
  if (n < 1) throw std::invalid_argument("sym_eig: empty matrix");
  if (n > 4000) throw std::invalid_argument("sym_eig: dimension exceeds the audit cap 4000");
  const double scale = m.max_abs();
  if (m.max_asymmetry() > 1e-12 * (scale > 0.0 ? scale : 1.0))
    throw std::invalid_argument("sym_eig: matrix not symmetric within 1e-12 relative");

  DenseMatrix a = m;
  a.symmetrize();
  DenseMatrix v = DenseMatrix::identity(n);
  const double total = a.frobenius_norm();

  const int max_sweeps = 60;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (total == 0.0 || off_diagonal_norm(a) <= 1e-15 * total) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // two-sided rotation in the (p, q) plane
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j);
          const double aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (sweep == max_sweeps) throw NumericalError("sym_eig: Jacobi iteration did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

double generalized_condition(const SymmetricOperator& a,
                             const std::function<Vector(const Vector&)>& apply_binv) {
  const int n = a.dimension();
  if (n > 2000) throw std::invalid_argument("generalized_condition: dense audit path capped at n = 2000");

  const SymmetricEigen ae = sym_eig(a.dense_view());
  if (!(ae.values.front() > 0.0))
    throw NumericalError("generalized_condition: operator A is not positive definite (lambda_min = " +
                         std::to_string(ae.values.front()) + ")");

  // A^{1/2} = V sqrt(L) V^T
  DenseMatrix ahalf(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += ae.vectors(i, k) * std::sqrt(ae.values[k]) * ae.vectors(j, k);
      ahalf(i, j) = s;
      ahalf(j, i) = s;
    }

  // S = A^{1/2} B^{-1} A^{1/2}, column by column
  DenseMatrix s(n, n);
  Vector col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = ahalf(i, j);
    Vector t = apply_binv(col);
    if (static_cast<int>(t.size()) != n)
      throw NumericalError("generalized_condition: preconditioner returned wrong dimension");
    Vector u = ahalf.apply(t);
    for (int i = 0; i < n; ++i) s(i, j) = u[i];
  }
  s.symmetrize();

  const SymmetricEigen se = sym_eig(s);
  const double lmin = se.values.front();
  const double lmax = se.values.back();
  if (!(lmin > 0.0))
    throw NumericalError("generalized_condition: preconditioned operator indefinite (lambda_min = " +
                         std::to_string(lmin) + ")");
  return lmax / lmin;
}

}  // namespace flexkrylov
