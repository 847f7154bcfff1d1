#pragma once

#include <optional>
#include <vector>

#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

/// Row-major dense real matrix. Sized for audits and coarse problems, not for
/// large systems; the iterative paths work against operators instead.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static DenseMatrix identity(int n);
  static DenseMatrix diagonal(const Vector& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  Vector apply(const Vector& x) const;
  DenseMatrix transposed() const;
  DenseMatrix multiplied_by(const DenseMatrix& other) const;

  double frobenius_norm() const;
  double max_abs() const;
  /// max |a_ij - a_ji| over all pairs; 0 for non-square never applies (square only).
  double max_asymmetry() const;
  void symmetrize();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// Cholesky factorization of an SPD dense matrix. Throws NumericalError if a
/// pivot is not strictly positive.
class DenseCholesky {
 public:
  explicit DenseCholesky(const DenseMatrix& m);
  Vector solve(const Vector& rhs) const;
  int dimension() const { return n_; }

 private:
  int n_ = 0;
  std::vector<double> lower_;  // row-major lower triangle, full storage
};

/// Cholesky factorization of a symmetric banded SPD matrix, lower band
/// storage: entry (i, j) with 0 <= i - j <= bandwidth lives at band(i, i - j).
class BandedCholesky {
 public:
  BandedCholesky(int n, int bandwidth);

  double& band(int i, int offset) { return a_[static_cast<std::size_t>(i) * (bw_ + 1) + offset]; }
  double band(int i, int offset) const { return a_[static_cast<std::size_t>(i) * (bw_ + 1) + offset]; }

  int dimension() const { return n_; }
  int bandwidth() const { return bw_; }

  /// Entry (i, j) of the assembled symmetric matrix (0 outside the band).
  /// Only meaningful before factorize().
  double entry(int i, int j) const;

  void factorize();
  Vector solve(const Vector& rhs) const;

 private:
  int n_ = 0;
  int bw_ = 0;
  bool factored_ = false;
  std::vector<double> a_;
};

}  // namespace flexkrylov
