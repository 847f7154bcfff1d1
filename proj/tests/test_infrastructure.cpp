#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "flexkrylov/dense_matrix.hpp"
#include "flexkrylov/memory_policy.hpp"
#include "flexkrylov/rng.hpp"
#include "flexkrylov/solver.hpp"
#include "support/oracles.hpp"

using namespace flexkrylov;

TEST_CASE("rng streams are reproducible and forks are independent") {
  Splitmix64Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Splitmix64Rng base(7);
  Splitmix64Rng f1 = base.fork(1);
  Splitmix64Rng f1_again = base.fork(1);
  Splitmix64Rng f2 = base.fork(2);
  CHECK(f1.next_u64() == f1_again.next_u64());
  CHECK(f1.next_u64() != f2.next_u64());

  // uniform01 stays in [0, 1); normals have sane first moments
  Splitmix64Rng r(99);
  double sum = 0.0, sum2 = 0.0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / trials) < 0.05);
  CHECK(std::abs(sum2 / trials - 1.0) < 0.05);
}

TEST_CASE("sampling without replacement is sorted, distinct, in range") {
  Splitmix64Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int population = 10 + static_cast<int>(rng.next_u64() % 200);
    const int count = 1 + static_cast<int>(rng.next_u64() % population);
    const std::vector<int> sample = rng.sample_without_replacement(population, count);
    REQUIRE(static_cast<int>(sample.size()) == count);
    std::set<int> seen;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      CHECK(sample[i] >= 0);
      CHECK(sample[i] < population);
      if (i > 0) CHECK(sample[i] > sample[i - 1]);
      seen.insert(sample[i]);
    }
    CHECK(static_cast<int>(seen.size()) == count);
  }
  CHECK_THROWS_AS(rng.sample_without_replacement(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(rng.sample_without_replacement(5, 0), std::invalid_argument);
}

TEST_CASE("banded Cholesky agrees with the dense LU oracle") {
  Splitmix64Rng rng(11);
  for (int bw : {0, 1, 3}) {
    const int n = 25;
    // diagonally dominant symmetric band matrix
    BandedCholesky banded(n, bw);
    DenseMatrix dense(n, n);
    for (int i = 0; i < n; ++i) {
      banded.band(i, 0) = 4.0 + rng.uniform01();
      dense(i, i) = banded.band(i, 0);
      for (int off = 1; off <= bw && i - off >= 0; ++off) {
        const double v = rng.uniform01() - 0.5;
        banded.band(i, off) = v;
        dense(i, i - off) = v;
        dense(i - off, i) = v;
      }
    }
    banded.factorize();
    const Vector rhs = rng.normal_vector(n);
    const Vector x_banded = banded.solve(rhs);
    const Vector x_oracle = oracles::lu_solve(dense, rhs);
    for (int i = 0; i < n; ++i) CHECK(x_banded[i] == doctest::Approx(x_oracle[i]).epsilon(1e-12));
  }
}

TEST_CASE("dense Cholesky rejects indefinite matrices") {
  DenseMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(DenseCholesky{m}, NumericalError);
}

TEST_CASE("explicit memory policy drives the window") {
  const SymmetricOperator a = SymmetricOperator::diagonal({1, 2, 3, 4, 5});
  const Vector x_true{1, 1, 1, 1, 1};
  const Vector b = a.apply(x_true);
  const Vector x0(5, 0.0);
  auto precond = identity_preconditioner();
  StoppingRule stop;
  stop.max_iterations = 4;
  const MemoryPolicy policy = MemoryPolicy::explicit_sequence({0, 1, 2, 2});
  const SolveTrace t = solve_flexible(a, b, x0, *precond, policy, stop, &x_true);
  REQUIRE(t.steps() == 4);
  CHECK(t.ortho_window == std::vector<int>{0, 1, 2, 2});
}

TEST_CASE("history cap: windowless runs continue, windowed runs refuse") {
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(40);
  const Vector b(40, 0.0), x_true(40, 0.0);
  Splitmix64Rng rng(13);
  const Vector x0 = rng.normal_vector(40);
  auto p1 = jacobi_preconditioner(a);
  StoppingRule stop;
  stop.max_iterations = 30;
  TraceOptions tight;
  tight.history_cap = 10;

  const SolveTrace psd = solve_flexible(a, b, x0, *p1, MemoryPolicy::psd(), stop, &x_true, tight);
  CHECK(psd.steps() == 30);
  CHECK(psd.history_truncated);

  auto p2 = jacobi_preconditioner(a);
  CHECK_THROWS_AS(solve_flexible(a, b, x0, *p2, MemoryPolicy::pcg(), stop, &x_true, tight),
                  std::invalid_argument);
}

TEST_CASE("residual tolerance stopping") {
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(30);
  Splitmix64Rng rng(17);
  const Vector x_true = rng.normal_vector(30);
  const Vector b = a.apply(x_true);
  const Vector x0(30, 0.0);
  auto precond = jacobi_preconditioner(a);
  StoppingRule stop;
  stop.max_iterations = 500;
  stop.residual_tolerance = 1e-9;
  const SolveTrace t = solve_flexible(a, b, x0, *precond, MemoryPolicy::pcg(), stop, &x_true);
  CHECK(t.termination == TerminationReason::residual_tolerance);
  const double r_final = norm2(subtract(b, a.apply(t.iterates.back())));
  CHECK(r_final <= 1e-9 * norm2(b) * 1.01);
}
