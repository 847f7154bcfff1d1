#include "flexkrylov/operator.hpp"

#include <stdexcept>
#include <string>

namespace flexkrylov {

namespace {
constexpr int kDenseViewCap = 4000;
}

SymmetricOperator SymmetricOperator::dense(DenseMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricOperator::dense: matrix not square");
  const double scale = m.max_abs();
  if (m.max_asymmetry() > 1e-12 * (scale > 0.0 ? scale : 1.0))
    throw std::invalid_argument("SymmetricOperator::dense: matrix not symmetric within 1e-12 relative");
  SymmetricOperator op;
  op.kind_ = Kind::dense;
  op.n_ = m.rows();
  m.symmetrize();
  op.dense_ = std::move(m);
  return op;
}

SymmetricOperator SymmetricOperator::diagonal(Vector d) {
  if (d.empty()) throw std::invalid_argument("SymmetricOperator::diagonal: empty diagonal");
  for (double v : d)
    if (!(v > 0.0)) throw std::invalid_argument("SymmetricOperator::diagonal: entries must be positive");
  SymmetricOperator op;
  op.kind_ = Kind::diagonal;
  op.n_ = static_cast<int>(d.size());
  op.diag_ = std::move(d);
  return op;
}

SymmetricOperator SymmetricOperator::laplacian_1d(int n) {
  if (n < 1) throw std::invalid_argument("SymmetricOperator::laplacian_1d: dimension must be positive");
  SymmetricOperator op;
  op.kind_ = Kind::tridiagonal_laplacian;
  op.n_ = n;
  return op;
}

void SymmetricOperator::apply(const Vector& x, Vector& y) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("SymmetricOperator::apply: dimension mismatch");
  y.resize(n_);
  switch (kind_) {
    case Kind::dense:
      y = dense_.apply(x);
      break;
    case Kind::diagonal:
      for (int i = 0; i < n_; ++i) y[i] = diag_[i] * x[i];
      break;
    case Kind::tridiagonal_laplacian:
      for (int i = 0; i < n_; ++i) {
        double v = 2.0 * x[i];
        if (i > 0) v -= x[i - 1];
        if (i + 1 < n_) v -= x[i + 1];
        y[i] = v;
      }
      break;
  }
}

Vector SymmetricOperator::apply(const Vector& x) const {
  Vector y;
  apply(x, y);
  return y;
}

DenseMatrix SymmetricOperator::dense_view() const {
  if (n_ > kDenseViewCap)
    throw std::invalid_argument("SymmetricOperator::dense_view: dimension " + std::to_string(n_) +
                                " exceeds the audit cap " + std::to_string(kDenseViewCap));
  switch (kind_) {
    case Kind::dense:
      return dense_;
    case Kind::diagonal:
      return DenseMatrix::diagonal(diag_);
    case Kind::tridiagonal_laplacian: {
      DenseMatrix m(n_, n_);
      for (int i = 0; i < n_; ++i) {
        m(i, i) = 2.0;
        if (i > 0) m(i, i - 1) = -1.0;
        if (i + 1 < n_) m(i, i + 1) = -1.0;
      }
      return m;
    }
  }
  throw std::logic_error("SymmetricOperator::dense_view: unknown kind");
}

Vector SymmetricOperator::diagonal_entries() const {
  switch (kind_) {
    case Kind::dense: {
      Vector d(n_);
      for (int i = 0; i < n_; ++i) d[i] = dense_(i, i);
      return d;
    }
    case Kind::diagonal:
      return diag_;
    case Kind::tridiagonal_laplacian:
      return Vector(n_, 2.0);
  }
  throw std::logic_error("SymmetricOperator::diagonal_entries: unknown kind");
}

}  // namespace flexkrylov
