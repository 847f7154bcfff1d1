#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flexkrylov/adversarial.hpp"
#include "flexkrylov/cone.hpp"
#include "flexkrylov/eig.hpp"
#include "flexkrylov/metric.hpp"
#include "flexkrylov/operator.hpp"
#include "flexkrylov/rng.hpp"
#include "support/oracles.hpp"

using namespace flexkrylov;

TEST_CASE("weighted inner products") {
  const Metric euclid = Metric::euclidean();
  CHECK(weighted_inner(euclid, {1, 2}, {3, 4}) == doctest::Approx(11.0));
  CHECK(weighted_inner(euclid, {1, 0}, {0, 1}) == doctest::Approx(0.0));

  const SymmetricOperator m = SymmetricOperator::diagonal({1, 2});
  const Metric induced = Metric::induced(m);
  CHECK(weighted_inner(induced, {1, 1}, {1, 1}) == doctest::Approx(3.0));

  CHECK_THROWS_AS(weighted_inner(euclid, {1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_inner(induced, {1, 2, 3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("positivity of (x, x)_M for nonzero x") {
  Splitmix64Rng rng(7);
  const DenseMatrix spd = oracles::random_spd(12, 0.5, 40.0, rng);
  const SymmetricOperator op = SymmetricOperator::dense(spd);
  const Metric metric = Metric::induced(op);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = rng.fork(trial).normal_vector(12);
    CHECK(weighted_inner(metric, x, x) > 0.0);
  }
}

TEST_CASE("angles") {
  const Metric euclid = Metric::euclidean();
  CHECK(angle(euclid, {1, 0}, {0, 1}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(angle(euclid, {3, 7}, {3, 7}) == doctest::Approx(0.0));
  CHECK(angle(euclid, {1, 0}, {1, 1}) == doctest::Approx(std::numbers::pi / 4));
  CHECK_THROWS_AS(angle(euclid, {0, 0}, {1, 1}), std::invalid_argument);
}

TEST_CASE("angle is invariant under positive scaling") {
  Splitmix64Rng rng(11);
  const Metric euclid = Metric::euclidean();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Splitmix64Rng r = rng.fork(trial);
    const int n = 2 + static_cast<int>(r.next_u64() % 9);
    const Vector x = r.normal_vector(n);
    const Vector y = r.normal_vector(n);
    const double sx = std::exp(4.0 * (r.uniform01() - 0.5));
    const double sy = std::exp(4.0 * (r.uniform01() - 0.5));
    worst = std::max(worst, std::abs(angle(euclid, x, y) - angle(euclid, scaled(x, sx), scaled(y, sy))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sym_eig on simple matrices") {
  CHECK_THROWS_AS(sym_eig(DenseMatrix(2, 3)), std::invalid_argument);

  const SymmetricEigen d = sym_eig(DenseMatrix::diagonal({3, 1, 2}));
  CHECK(d.values[0] == doctest::Approx(1.0));
  CHECK(d.values[1] == doctest::Approx(2.0));
  CHECK(d.values[2] == doctest::Approx(3.0));

  const SymmetricEigen id = sym_eig(DenseMatrix::identity(5));
  for (double v : id.values) CHECK(v == doctest::Approx(1.0));

  DenseMatrix asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 0.5;
  CHECK_THROWS_AS(sym_eig(asym), std::invalid_argument);
}

TEST_CASE("sym_eig of the n=3 Laplacian matches the analytic spectrum") {
  const SymmetricOperator lap = SymmetricOperator::laplacian_1d(3);
  const SymmetricEigen e = sym_eig(lap.dense_view());
  // 2 - 2 cos(k pi / (n+1)); for n = 3 that is 2 - sqrt(2), 2, 2 + sqrt(2)
  CHECK(e.values[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  // cross-check: the characteristic polynomial l^3 - 6 l^2 + 10 l - 4 vanishes
  for (double l : e.values) {
    const double p = ((l - 6.0) * l + 10.0) * l - 4.0;
    CHECK(std::abs(p) <= 1e-10);
  }
}

TEST_CASE("sym_eig residuals, orthonormality, reconstruction") {
  Splitmix64Rng rng(23);
  for (int n : {5, 50, 200}) {
    Splitmix64Rng r = rng.fork(n);
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = r.normal();
        m(i, j) = v;
        m(j, i) = v;
      }
    const SymmetricEigen e = sym_eig(m);
    const double mnorm = m.frobenius_norm();

    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
      Vector vj(n);
      for (int i = 0; i < n; ++i) vj[i] = e.vectors(i, j);
      Vector mv = m.apply(vj);
      axpy(-e.values[j], vj, mv);
      residual = std::max(residual, norm2(mv));
    }
    CHECK(residual <= 1e-10 * mnorm);

    double ortho = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += e.vectors(k, i) * e.vectors(k, j);
        ortho = std::max(ortho, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    CHECK(ortho <= 1e-10);

    double recon = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        recon += (s - m(i, j)) * (s - m(i, j));
      }
    CHECK(std::sqrt(recon) <= 1e-9 * mnorm);
  }
}

TEST_CASE("generalized_condition") {
  Splitmix64Rng rng(31);
  const DenseMatrix ad = oracles::random_spd(20, 1.0, 25.0, rng);
  const SymmetricOperator a = SymmetricOperator::dense(ad);

  SUBCASE("exact inverse gives 1") {
    const double kappa =
        generalized_condition(a, [&](const Vector& r) { return oracles::lu_solve(ad, r); });
    CHECK(kappa == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("identity preconditioner reproduces kappa(A)") {
    const SymmetricOperator diag = SymmetricOperator::diagonal({1, 2});
    const double kappa = generalized_condition(diag, [](const Vector& r) { return r; });
    CHECK(kappa == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("indefinite action is diagnosed") {
    CHECK_THROWS_AS(generalized_condition(a, [](const Vector& r) { return scaled(r, -1.0); }),
                    NumericalError);
  }
  SUBCASE("diagonal pencil has a closed-form condition number") {
    Splitmix64Rng r(5);
    const int n = 30;
    Vector da(n), db(n);
    for (int i = 0; i < n; ++i) {
      da[i] = 0.5 + 9.5 * r.uniform01();
      db[i] = 0.5 + 9.5 * r.uniform01();
    }
    const SymmetricOperator diag_a = SymmetricOperator::diagonal(da);
    double lo = da[0] * db[0], hi = lo;  // B^{-1}A has eigenvalues d_a[i] * d_binv[i]
    for (int i = 1; i < n; ++i) {
      lo = std::min(lo, da[i] * db[i]);
      hi = std::max(hi, da[i] * db[i]);
    }
    const double kappa = generalized_condition(diag_a, [&](const Vector& v) {
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = db[i] * v[i];
      return out;
    });
    CHECK(kappa == doctest::Approx(hi / lo).epsilon(1e-10));
  }
}

TEST_CASE("adversarial map materialized through the cone construction has kappa = kappa_max") {
  Splitmix64Rng rng(37);
  const int n = 40;
  const SymmetricOperator a = SymmetricOperator::laplacian_1d(n);
  const Metric metric = Metric::induced(a);
  const double kappa_max = 2.0;

  // one adversarial direction for a random error
  const Vector e = rng.normal_vector(n);
  AdversarialPreconditioner precond(kappa_max, rng.fork(1));
  StepContext ctx;
  ctx.iteration = 0;
  ctx.op = &a;
  const Vector x(n, 0.0);
  ctx.current_iterate = &x;
  ctx.true_solution = &e;
  ApplyMeta meta;
  const Vector s = precond.apply(a.apply(e), ctx, meta);

  const DenseMatrix binv = materialize_adversarial_binv(a, e, s);
  const double kappa = generalized_condition(a, [&](const Vector& r) { return binv.apply(r); });
  CHECK(std::abs(kappa - kappa_max) <= 1e-8);
}

TEST_CASE("operator symmetry and Laplacian dense view") {
  const SymmetricOperator lap = SymmetricOperator::laplacian_1d(17);
  Splitmix64Rng rng(41);
  const Vector x = rng.normal_vector(17);
  const Vector y = rng.fork(1).normal_vector(17);
  CHECK(dot(lap.apply(x), y) == doctest::Approx(dot(x, lap.apply(y))).epsilon(1e-13));

  const DenseMatrix dense = lap.dense_view();
  const Vector via_dense = dense.apply(x);
  const Vector direct = lap.apply(x);
  for (int i = 0; i < 17; ++i) CHECK(via_dense[i] == doctest::Approx(direct[i]));

  CHECK_THROWS_AS(SymmetricOperator::laplacian_1d(5000).dense_view(), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricOperator::diagonal({1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("positive definiteness of dense views is auditable") {
  Splitmix64Rng rng(43);
  const DenseMatrix m = oracles::random_spd(15, 0.1, 9.0, rng);
  const SymmetricOperator a = SymmetricOperator::dense(m);
  const SymmetricEigen e = sym_eig(a.dense_view());
  CHECK(e.values.front() > 0.0);
  CHECK(e.values.back() / e.values.front() == doctest::Approx(90.0).epsilon(1e-8));
}
