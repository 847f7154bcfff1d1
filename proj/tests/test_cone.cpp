#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flexkrylov/cone.hpp"
#include "flexkrylov/eig.hpp"
#include "flexkrylov/metric.hpp"
#include "flexkrylov/rng.hpp"
#include "support/oracles.hpp"

using namespace flexkrylov;

namespace {

// kappa of a symmetric map from its eigendecomposition, independent of the
// construction path.
double measured_kappa(DenseMatrix c) {
  c.symmetrize();
  const SymmetricEigen e = sym_eig(c);
  REQUIRE(e.values.front() > 0.0);
  return e.values.back() / e.values.front();
}

}  // namespace

TEST_CASE("spectral_bound") {
  CHECK(spectral_bound(1.0) == doctest::Approx(0.0));
  CHECK(spectral_bound(2.0) == doctest::Approx(1.0 / 3.0));
  CHECK(spectral_bound(3.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(spectral_bound(0.9), std::invalid_argument);
}

TEST_CASE("construct_spd_map basics") {
  const Metric euclid = Metric::euclidean();

  SUBCASE("parallel vectors give the identity") {
    const SpdMapResult r = construct_spd_map(euclid, {1, 0}, {1, 0});
    CHECK(r.kappa == doctest::Approx(1.0));
    CHECK(r.achieved_sin == doctest::Approx(0.0));
    CHECK(r.map(0, 0) == doctest::Approx(1.0));
    CHECK(r.map(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("45 degrees gives kappa = 3 + 2 sqrt(2), verified by eigendecomposition") {
    const SpdMapResult r = construct_spd_map(euclid, {1, 0}, {1, 1});
    const double expected = (2.0 + std::sqrt(2.0)) / (2.0 - std::sqrt(2.0));
    CHECK(r.kappa == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)));
    CHECK(measured_kappa(r.map) == doctest::Approx(expected).epsilon(1e-10));
    // C x is parallel to y
    const Vector cx = r.map.apply({1, 0});
    CHECK(cx[0] == doctest::Approx(cx[1]).epsilon(1e-12));
    CHECK(cx[0] > 0.0);
  }
  SUBCASE("rejects angles at or beyond pi/2 and zero vectors") {
    CHECK_THROWS_AS(construct_spd_map(euclid, {1, 0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(construct_spd_map(euclid, {1, 0}, {-1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(construct_spd_map(euclid, {0, 0}, {1, 1}), std::invalid_argument);
  }
}

TEST_CASE("construct_spd_map in an induced metric") {
  const SymmetricOperator m = SymmetricOperator::diagonal({1, 2});
  const Metric metric = Metric::induced(m);
  Splitmix64Rng rng(5);
  int built = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Splitmix64Rng r = rng.fork(trial);
    const Vector x = r.normal_vector(2);
    const Vector y = r.normal_vector(2);
    if (norm2(x) == 0.0 || norm2(y) == 0.0) continue;
    if (!(metric.cosine(x, y) > 0.05)) continue;
    const SpdMapResult c = construct_spd_map(metric, x, y);
    ++built;
    // C x parallel to y, same metric direction
    CHECK(metric.cosine(c.map.apply(x), y) == doctest::Approx(1.0).epsilon(1e-12));
    // self-adjoint in the metric
    const Vector u = r.normal_vector(2);
    const Vector v = r.normal_vector(2);
    const double lhs = metric.inner(c.map.apply(u), v);
    const double rhs = metric.inner(u, c.map.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
  CHECK(built > 10);
}

// C = I + sin(a) H for a reflection H with eigenvalues -1 (once, on the
// reflector axis) and +1 elsewhere, so the spectrum is 1 - sin(a) once and
// 1 + sin(a) with multiplicity n - 1.
TEST_CASE("construct_spd_map eigenvalues are 1 - sin(a) once and 1 + sin(a) elsewhere") {
  Splitmix64Rng rng(9);
  const int n = 7;
  const DenseMatrix md = oracles::random_spd(n, 0.5, 8.0, rng);
  const SymmetricOperator m_op = SymmetricOperator::dense(md);

  for (int metric_case = 0; metric_case < 2; ++metric_case) {
    const Metric metric = metric_case == 0 ? Metric::euclidean() : Metric::induced(m_op);
    Splitmix64Rng r = rng.fork(100 + metric_case);
    Vector x = r.normal_vector(n);
    Vector y = r.normal_vector(n);
    // bias y toward x so the angle is acute
    axpy(2.0 * metric.norm(y) / metric.norm(x), x, y);
    REQUIRE(metric.cosine(x, y) > 0.0);
    const SpdMapResult c = construct_spd_map(metric, x, y);

    DenseMatrix sym(n, n);
    if (metric.is_euclidean()) {
      sym = c.map;
    } else {
      const SymmetricEigen me = sym_eig(md);
      DenseMatrix mhalf(n, n), mhalf_inv(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0, si = 0.0;
          for (int k = 0; k < n; ++k) {
            s += me.vectors(i, k) * std::sqrt(me.values[k]) * me.vectors(j, k);
            si += me.vectors(i, k) / std::sqrt(me.values[k]) * me.vectors(j, k);
          }
          mhalf(i, j) = s;
          mhalf_inv(i, j) = si;
        }
      sym = mhalf.multiplied_by(c.map).multiplied_by(mhalf_inv);
    }
    sym.symmetrize();
    const SymmetricEigen e = sym_eig(sym);
    CHECK(std::abs(e.values.front() - (1.0 - c.achieved_sin)) <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(std::abs(e.values[i] - (1.0 + c.achieved_sin)) <= 1e-10);
    // kappa = (1 + sin)/(1 - sin) within 1e-12 by construction
    CHECK(std::abs(c.kappa - (1.0 + c.achieved_sin) / (1.0 - c.achieved_sin)) <= 1e-12);
  }
}

TEST_CASE("construct_spd_map is invariant under positive scaling of y") {
  Splitmix64Rng rng(13);
  const Metric euclid = Metric::euclidean();
  const Vector x = rng.normal_vector(5);
  Vector y = rng.fork(1).normal_vector(5);
  axpy(2.0 * norm2(y) / norm2(x), x, y);
  const SpdMapResult a = construct_spd_map(euclid, x, y);
  const SpdMapResult b = construct_spd_map(euclid, x, scaled(y, 17.0));
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(a.map(i, j) - b.map(i, j)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("cone_membership") {
  const Metric euclid = Metric::euclidean();
  CHECK(cone_membership(euclid, {2, 3}, {2, 3}, 1.0));
  CHECK(cone_membership(euclid, {1, 0}, {3, 1}, 2.0));       // sin = 1/sqrt(10) <= 1/3
  CHECK_FALSE(cone_membership(euclid, {1, 0}, {1, 1}, 2.0)); // sin = sqrt(2)/2 > 1/3
  CHECK_FALSE(cone_membership(euclid, {1, 0}, {-1, 0}, 100.0));
  CHECK_THROWS_AS(cone_membership(euclid, {0, 0}, {1, 1}, 2.0), std::invalid_argument);
}

TEST_CASE("sin angle bound for random SPD images (small sample)") {
  Splitmix64Rng rng(17);
  double worst = -1.0;
  for (int trial = 0; trial < 100; ++trial) {
    Splitmix64Rng r = rng.fork(trial);
    const int n = 2 + static_cast<int>(r.next_u64() % 10);
    const double kappa = 1.0 + 30.0 * r.uniform01();
    const DenseMatrix c = oracles::random_spd(n, 1.0, kappa, r);
    const Vector x = r.normal_vector(n);
    if (norm2(x) == 0.0) continue;
    const Metric euclid = Metric::euclidean();
    const double s = sine_of_angle(euclid, x, c.apply(x));
    worst = std::max(worst, s - (kappa - 1.0) / (kappa + 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("round trip between membership and construction") {
  Splitmix64Rng rng(19);
  const Metric euclid = Metric::euclidean();
  for (int trial = 0; trial < 100; ++trial) {
    Splitmix64Rng r = rng.fork(trial);
    const int n = 3 + static_cast<int>(r.next_u64() % 6);
    const double kappa_max = 1.2 + 8.0 * r.uniform01();
    const Vector x = r.normal_vector(n);
    const Vector y = r.normal_vector(n);
    if (norm2(x) == 0.0 || norm2(y) == 0.0) continue;
    if (cone_membership(euclid, x, y, kappa_max) &&
        sine_of_angle(euclid, x, y) < spectral_bound(kappa_max) - 1e-9) {
      const SpdMapResult c = construct_spd_map(euclid, x, y);
      CHECK(c.kappa <= kappa_max + 1e-10);
    }
    // images of bounded-kappa SPD maps always pass membership
    const DenseMatrix c = oracles::random_spd(n, 1.0, kappa_max, r);
    CHECK(cone_membership(euclid, x, c.apply(x), kappa_max));
  }
}
