#include "flexkrylov/two_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "flexkrylov/errors.hpp"

namespace flexkrylov {

namespace {

// Fine-index support of coarse column j: the open interval between the
// neighboring coarse points, with virtual Dirichlet points at -1 and n.
std::pair<int, int> column_support(const std::vector<int>& coarse, int n, int j) {
  const int nc = static_cast<int>(coarse.size());
  const int lo = (j > 0) ? coarse[j - 1] + 1 : 0;
  const int hi = (j + 1 < nc) ? coarse[j + 1] - 1 : n - 1;
  return {lo, hi};
}

double weight_of(const InterpolationPoint& ip, int coarse_column) {
  double w = 0.0;
  if (ip.left == coarse_column) w += ip.weight_left;
  if (ip.right == coarse_column) w += ip.weight_right;
  return w;
}

std::vector<InterpolationPoint> build_interpolation(const std::vector<int>& coarse, int n) {
  std::vector<InterpolationPoint> interp(n);
  const int nc = static_cast<int>(coarse.size());
  int next = 0;  // first coarse index with coarse[next] >= f
  for (int f = 0; f < n; ++f) {
    while (next < nc && coarse[next] < f) ++next;
    InterpolationPoint ip;
    if (next < nc && coarse[next] == f) {
      ip.left = next;
      ip.weight_left = 1.0;
    } else {
      const int li = next - 1;              // nearest coarse to the left, -1 if none
      const int left_pos = (li >= 0) ? coarse[li] : -1;
      const int right_pos = (next < nc) ? coarse[next] : n;
      const double gap = right_pos - left_pos;
      if (li >= 0) {
        ip.left = li;
        ip.weight_left = (right_pos - f) / gap;
      }
      if (next < nc) {
        ip.right = next;
        ip.weight_right = (f - left_pos) / gap;
      }
    }
    interp[f] = ip;
  }
  return interp;
}

}  // namespace

TwoGridHierarchy build_two_grid(const SymmetricOperator& a, std::vector<int> coarse_indices,
                                const TwoGridOptions& options) {
  const int n = a.dimension();
  if (coarse_indices.empty()) throw std::invalid_argument("build_two_grid: empty coarse set");
  std::sort(coarse_indices.begin(), coarse_indices.end());
  for (std::size_t i = 0; i < coarse_indices.size(); ++i) {
    if (coarse_indices[i] < 0 || coarse_indices[i] >= n)
      throw std::invalid_argument("build_two_grid: coarse index out of range");
    if (i > 0 && coarse_indices[i] == coarse_indices[i - 1])
      throw std::invalid_argument("build_two_grid: duplicate coarse index");
  }
  if (options.smoothing_steps < 0) throw std::invalid_argument("build_two_grid: negative smoothing count");
  if (!(options.omega > 0.0)) throw std::invalid_argument("build_two_grid: damping must be positive");

  TwoGridHierarchy h;
  h.op = &a;
  h.fine_dimension = n;
  h.coarse = std::move(coarse_indices);
  h.interp = build_interpolation(h.coarse, n);
  h.omega = options.omega;
  h.smoothing_steps = options.smoothing_steps;

  const int nc = static_cast<int>(h.coarse.size());
  const bool structured =
      a.kind() == SymmetricOperator::Kind::tridiagonal_laplacian || a.kind() == SymmetricOperator::Kind::diagonal;

  if (structured) {
    // Neighboring columns are the only ones whose supports a band-1 operator
    // couples, so the Galerkin matrix is tridiagonal in the coarse numbering.
    const int bw = std::min(1, nc - 1);
    BandedCholesky ac(nc, bw);
    const Vector diag = a.diagonal_entries();
    for (int j = 0; j < nc; ++j) {
      const auto [lo, hi] = column_support(h.coarse, n, j);
      std::vector<double> v(hi - lo + 1, 0.0);
      for (int f = lo; f <= hi; ++f) v[f - lo] = weight_of(h.interp[f], j);
      const int wlo = std::max(lo - 1, 0);
      const int whi = std::min(hi + 1, n - 1);
      std::vector<double> w(whi - wlo + 1, 0.0);
      auto v_at = [&](int f) { return (f >= lo && f <= hi) ? v[f - lo] : 0.0; };
      for (int f = wlo; f <= whi; ++f) {
        if (a.kind() == SymmetricOperator::Kind::tridiagonal_laplacian)
          w[f - wlo] = 2.0 * v_at(f) - v_at(f - 1) - v_at(f + 1);
        else
          w[f - wlo] = diag[f] * v_at(f);
      }
      for (int i = j; i <= std::min(j + 1, nc - 1); ++i) {
        const auto [ilo, ihi] = column_support(h.coarse, n, i);
        double entry = 0.0;
        for (int f = std::max(ilo, wlo); f <= std::min(ihi, whi); ++f)
          entry += weight_of(h.interp[f], i) * w[f - wlo];
        if (i - j <= bw) ac.band(i, i - j) = entry;
      }
    }
    if (nc <= 1000) {
      DenseMatrix dense(nc, nc);
      for (int i = 0; i < nc; ++i)
        for (int j = std::max(0, i - bw); j <= std::min(nc - 1, i + bw); ++j) dense(i, j) = ac.entry(i, j);
      h.coarse_matrix = std::move(dense);
    }
    h.coarse_bandwidth = bw;
    try {
      ac.factorize();
    } catch (const NumericalError& err) {
      throw NumericalError(std::string("build_two_grid: coarse solve setup failed: ") + err.what());
    }
    h.banded_solver = std::move(ac);
  } else {
    if (nc > 1000)
      throw NumericalError("build_two_grid: dense coarse fallback capped at 1000 points (got " +
                           std::to_string(nc) + ")");
    DenseMatrix ac(nc, nc);
    Vector unit(nc, 0.0);
    for (int j = 0; j < nc; ++j) {
      unit[j] = 1.0;
      const Vector column = restrict_to_coarse(h, a.apply(prolong_to_fine(h, unit)));
      for (int i = 0; i < nc; ++i) ac(i, j) = column[i];
      unit[j] = 0.0;
    }
    ac.symmetrize();
    int bw = 0;
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < i; ++j)
        if (ac(i, j) != 0.0) bw = std::max(bw, i - j);
    h.coarse_bandwidth = bw;
    h.coarse_matrix = ac;
    try {
      h.dense_solver.emplace(ac);
    } catch (const NumericalError& err) {
      throw NumericalError(std::string("build_two_grid: coarse solve setup failed: ") + err.what());
    }
  }
  return h;
}

Vector prolong_to_fine(const TwoGridHierarchy& h, const Vector& coarse_values) {
  if (coarse_values.size() != h.coarse.size())
    throw std::invalid_argument("prolong_to_fine: dimension mismatch");
  Vector fine(h.fine_dimension, 0.0);
  for (int f = 0; f < h.fine_dimension; ++f) {
    const InterpolationPoint& ip = h.interp[f];
    double v = 0.0;
    if (ip.left >= 0) v += ip.weight_left * coarse_values[ip.left];
    if (ip.right >= 0) v += ip.weight_right * coarse_values[ip.right];
    fine[f] = v;
  }
  return fine;
}

Vector restrict_to_coarse(const TwoGridHierarchy& h, const Vector& fine_values) {
  if (static_cast<int>(fine_values.size()) != h.fine_dimension)
    throw std::invalid_argument("restrict_to_coarse: dimension mismatch");
  Vector coarse(h.coarse.size(), 0.0);
  for (int f = 0; f < h.fine_dimension; ++f) {
    const InterpolationPoint& ip = h.interp[f];
    if (ip.left >= 0) coarse[ip.left] += ip.weight_left * fine_values[f];
    if (ip.right >= 0) coarse[ip.right] += ip.weight_right * fine_values[f];
  }
  return coarse;
}

Vector two_grid_apply(const TwoGridHierarchy& h, const Vector& r) {
  if (!h.op) throw std::invalid_argument("two_grid_apply: hierarchy not built");
  const SymmetricOperator& a = *h.op;
  if (static_cast<int>(r.size()) != h.fine_dimension)
    throw std::invalid_argument("two_grid_apply: dimension mismatch");

  Vector z(h.fine_dimension, 0.0);
  for (int step = 0; step < h.smoothing_steps; ++step) {
    const Vector az = a.apply(z);
    for (int i = 0; i < h.fine_dimension; ++i) z[i] += h.omega * (r[i] - az[i]);
  }
  Vector residual = subtract(r, a.apply(z));
  const Vector rc = restrict_to_coarse(h, residual);
  Vector zc;
  if (h.banded_solver)
    zc = h.banded_solver->solve(rc);
  else if (h.dense_solver)
    zc = h.dense_solver->solve(rc);
  else
    throw NumericalError("two_grid_apply: coarse solver unavailable");
  axpy(1.0, prolong_to_fine(h, zc), z);
  for (int step = 0; step < h.smoothing_steps; ++step) {
    const Vector az = a.apply(z);
    for (int i = 0; i < h.fine_dimension; ++i) z[i] += h.omega * (r[i] - az[i]);
  }
  return z;
}

TwoGridPreconditioner::TwoGridPreconditioner(int n, int coarse_count, CoarseGridMode mode, Splitmix64Rng rng,
                                             TwoGridOptions options)
    : n_(n), coarse_count_(coarse_count), mode_(mode), rng_(rng), options_(options) {
  if (n < 1) throw std::invalid_argument("two_grid_preconditioner: dimension must be positive");
  if (coarse_count < 1 || coarse_count > n)
    throw std::invalid_argument("two_grid_preconditioner: coarse count must lie in [1, n]");
}

std::string TwoGridPreconditioner::label() const {
  return mode_ == CoarseGridMode::fixed ? "two-grid(fixed)" : "two-grid(random)";
}

Vector TwoGridPreconditioner::apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) {
  if (!ctx.op) throw std::invalid_argument("two_grid_preconditioner: context must carry the operator");
  if (ctx.op->dimension() != n_) throw std::invalid_argument("two_grid_preconditioner: dimension mismatch");
  if (mode_ == CoarseGridMode::rerandomized || !hierarchy_)
    hierarchy_ = build_two_grid(*ctx.op, rng_.sample_without_replacement(n_, coarse_count_), options_);
  meta.label = label();
  return two_grid_apply(*hierarchy_, residual);
}

std::unique_ptr<Preconditioner> two_grid_preconditioner(int n, int coarse_count, CoarseGridMode mode,
                                                        Splitmix64Rng rng, TwoGridOptions options) {
  return std::make_unique<TwoGridPreconditioner>(n, coarse_count, mode, rng, options);
}

}  // namespace flexkrylov
