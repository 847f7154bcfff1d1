#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/preconditioner.hpp"
#include "flexkrylov/rng.hpp"

namespace flexkrylov {

/// Restriction of the piecewise-linear interpolation to one fine point: up to
/// two coarse neighbors with weights. Fine points outside the coarse hull
/// interpolate toward the homogeneous Dirichlet value 0 at the ends.
struct InterpolationPoint {
  int left = -1;   // coarse column index, -1 when absent
  int right = -1;
  double weight_left = 0.0;
  double weight_right = 0.0;
};

struct TwoGridOptions {
  double omega = 0.25;      // Richardson damping; keeps omega * lambda in (0, 1) for tridiag(-1, 2, -1)
  int smoothing_steps = 1;  // nu, pre = post so the cycle stays symmetric
};

/// Coarse-point set, interpolation, Galerkin coarse operator, and smoother
/// parameters for the symmetric two-grid cycle. Holds a non-owning pointer to
/// the fine operator, which must outlive the hierarchy.
struct TwoGridHierarchy {
  const SymmetricOperator* op = nullptr;
  int fine_dimension = 0;
  std::vector<int> coarse;                     // sorted, distinct
  std::vector<InterpolationPoint> interp;      // one per fine point
  double omega = 0.25;
  int smoothing_steps = 1;
  int coarse_bandwidth = 0;
  std::optional<BandedCholesky> banded_solver; // factorized Galerkin matrix
  std::optional<DenseCholesky> dense_solver;   // fallback for wide bands
  std::optional<DenseMatrix> coarse_matrix;    // unfactored A_c, kept when size <= 1000
};

/// Builds P (piecewise linear by index distance between nearest coarse
/// neighbors), the Galerkin matrix A_c = P^T A P, and its factorization.
/// A_c assembles into banded storage when the detected bandwidth allows,
/// otherwise a dense factorization (coarse size <= 1000).
TwoGridHierarchy build_two_grid(const SymmetricOperator& a, std::vector<int> coarse_indices,
                                const TwoGridOptions& options = {});

Vector prolong_to_fine(const TwoGridHierarchy& h, const Vector& coarse_values);   // P z_c
Vector restrict_to_coarse(const TwoGridHierarchy& h, const Vector& fine_values);  // P^T r

/// One symmetric two-grid cycle on A z = r from z = 0: nu Richardson
/// pre-smoothing steps, exact coarse correction, nu post-smoothing steps.
Vector two_grid_apply(const TwoGridHierarchy& h, const Vector& r);

enum class CoarseGridMode { fixed, rerandomized };

/// Two-grid preconditioner over random coarse sets: `fixed` samples the
/// coarse points once on the first application and reuses the hierarchy;
/// `rerandomized` resamples and rebuilds on every application.
class TwoGridPreconditioner final : public Preconditioner {
 public:
  TwoGridPreconditioner(int n, int coarse_count, CoarseGridMode mode, Splitmix64Rng rng,
                        TwoGridOptions options = {});

  Vector apply(const Vector& residual, const StepContext& ctx, ApplyMeta& meta) override;
  std::string label() const override;

 private:
  int n_;
  int coarse_count_;
  CoarseGridMode mode_;
  Splitmix64Rng rng_;
  TwoGridOptions options_;
  std::optional<TwoGridHierarchy> hierarchy_;
};

std::unique_ptr<Preconditioner> two_grid_preconditioner(int n, int coarse_count, CoarseGridMode mode,
                                                        Splitmix64Rng rng, TwoGridOptions options = {});

}  // namespace flexkrylov
