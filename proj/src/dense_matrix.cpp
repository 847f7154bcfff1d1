#include "flexkrylov/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flexkrylov {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const Vector& d) {
  DenseMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

Vector DenseMatrix::apply(const Vector& x) const {
  if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::multiplied_by(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("DenseMatrix::multiplied_by: dimension mismatch");
  DenseMatrix c(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < other.cols_; ++j) c(i, j) += aik * other(k, j);
    }
  return c;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

void DenseMatrix::symmetrize() {
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

DenseCholesky::DenseCholesky(const DenseMatrix& m) : n_(m.rows()) {
  if (m.rows() != m.cols()) throw std::invalid_argument("DenseCholesky: matrix not square");
  lower_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  auto l = [&](int i, int j) -> double& { return lower_[static_cast<std::size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0))
      throw NumericalError("DenseCholesky: matrix not positive definite (pivot " + std::to_string(d) +
                           " at column " + std::to_string(j) + ")");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n_; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
}

Vector DenseCholesky::solve(const Vector& rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("DenseCholesky::solve: dimension mismatch");
  auto l = [&](int i, int j) { return lower_[static_cast<std::size_t>(i) * n_ + j]; };
  Vector y(rhs);
  for (int i = 0; i < n_; ++i) {
    double s = y[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n_; ++k) s -= l(k, i) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

BandedCholesky::BandedCholesky(int n, int bandwidth) : n_(n), bw_(bandwidth) {
  if (n < 1 || bandwidth < 0 || bandwidth >= std::max(n, 1))
    throw std::invalid_argument("BandedCholesky: bad dimensions");
  a_.assign(static_cast<std::size_t>(n) * (bw_ + 1), 0.0);
}

double BandedCholesky::entry(int i, int j) const {
  if (i < j) std::swap(i, j);
  const int off = i - j;
  if (off > bw_) return 0.0;
  return band(i, off);
}

void BandedCholesky::factorize() {
  for (int j = 0; j < n_; ++j) {
    double d = band(j, 0);
    for (int k = std::max(0, j - bw_); k < j; ++k) {
      const double v = band(j, j - k);
      d -= v * v;
    }
    if (!(d > 0.0))
      throw NumericalError("BandedCholesky: matrix not positive definite (pivot " + std::to_string(d) +
                           " at column " + std::to_string(j) + ")");
    const double ljj = std::sqrt(d);
    band(j, 0) = ljj;
    const int last = std::min(n_ - 1, j + bw_);
    for (int i = j + 1; i <= last; ++i) {
      double s = band(i, i - j);
      for (int k = std::max(0, i - bw_); k < j; ++k) {
        if (j - k <= bw_) s -= band(i, i - k) * band(j, j - k);
      }
      band(i, i - j) = s / ljj;
    }
  }
  factored_ = true;
}

Vector BandedCholesky::solve(const Vector& rhs) const {
  if (!factored_) throw std::logic_error("BandedCholesky::solve before factorize");
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandedCholesky::solve: dimension mismatch");
  Vector y(rhs);
  for (int i = 0; i < n_; ++i) {
    double s = y[i];
    for (int k = std::max(0, i - bw_); k < i; ++k) s -= band(i, i - k) * y[k];
    y[i] = s / band(i, 0);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = y[i];
    const int last = std::min(n_ - 1, i + bw_);
    for (int k = i + 1; k <= last; ++k) s -= band(k, k - i) * y[k];
    y[i] = s / band(i, 0);
  }
  return y;
}

}  // namespace flexkrylov
