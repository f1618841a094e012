#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nfsic/kernels.hpp"
#include "nfsic/rng.hpp"

using namespace nfsic;

TEST_SUITE("kernels") {

TEST_CASE("eval matches the closed form") {
  GaussianKernel k1(1.0);
  Vector a(2), b(2);
  a << 0.3, -1.2;
  CHECK(eval(k1, a, a) == doctest::Approx(1.0).epsilon(1e-15));

  b << 1.0, 1.0;  // ||b||^2 = 2
  Vector zero = Vector::Zero(2);
  CHECK(eval(k1, zero, b) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  GaussianKernel k2(2.0);
  Vector x(2), v(2);
  x << 1.0, 0.0;
  v << 0.0, 1.0;
  CHECK(eval(k2, x, v) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("eval rejects dimension mismatch and bad widths") {
  GaussianKernel k(1.0);
  Vector a(2), b(3);
  a.setZero();
  b.setZero();
  CHECK_THROWS_AS(eval(k, a, b), InputError);
  CHECK_THROWS_AS(GaussianKernel(0.0), InputError);
  CHECK_THROWS_AS(GaussianKernel(-1.0), InputError);
}

TEST_CASE("eval symmetry and boundedness") {
  Rng rng(11);
  GaussianKernel k(0.7);
  for (int t = 0; t < 50; ++t) {
    Vector x(3), v(3);
    for (int d = 0; d < 3; ++d) {
      x[d] = rng.normal();
      v[d] = rng.normal();
    }
    const double kxv = eval(k, x, v);
    CHECK(kxv == doctest::Approx(eval(k, v, x)).epsilon(1e-15));
    CHECK(kxv > 0.0);
    CHECK(kxv <= 1.0);
    CHECK(eval(k, x, x) == doctest::Approx(1.0));
  }
}

TEST_CASE("median heuristic on tiny hand cases") {
  Matrix two(2, 1);
  two << 0.0, 2.0;
  CHECK(median_heuristic(two) == doctest::Approx(2.0).epsilon(1e-15));

  // {0, 1, 3}: pairwise distances {1, 2, 3}, median 2.
  Matrix three(3, 1);
  three << 0.0, 1.0, 3.0;
  CHECK(median_heuristic(three) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("median heuristic matches brute-force sorted median") {
  Rng rng(42);
  Matrix pts(100, 1);
  for (int i = 0; i < 100; ++i) pts(i, 0) = rng.normal();

  std::vector<double> dists;
  for (int i = 0; i < 100; ++i) {
    for (int j = i + 1; j < 100; ++j) {
      dists.push_back(std::abs(pts(i, 0) - pts(j, 0)));
    }
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  const double expect = (m % 2 == 1)
                            ? dists[m / 2]
                            : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
  CHECK(median_heuristic(pts) == expect);
}

TEST_CASE("median heuristic input errors") {
  Matrix one(1, 2);
  one.setZero();
  CHECK_THROWS_AS(median_heuristic(one), InputError);

  Matrix same(5, 2);
  same.setConstant(3.0);
  CHECK_THROWS_AS(median_heuristic(same), DegenerateInputError);
}

TEST_CASE("median heuristic translation and scale behavior") {
  Rng rng(7);
  Matrix pts(40, 3);
  for (int i = 0; i < 40; ++i) {
    for (int d = 0; d < 3; ++d) pts(i, d) = rng.normal();
  }
  const double base = median_heuristic(pts);

  Matrix shifted = pts;
  shifted.array() += 17.5;
  CHECK(median_heuristic(shifted) == doctest::Approx(base).epsilon(1e-12));

  Matrix scaled = 3.0 * pts;
  CHECK(median_heuristic(scaled) == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("subsample cap leaves small inputs exact") {
  Rng rng(19);
  Matrix pts(60, 2);
  for (int i = 0; i < 60; ++i) {
    pts(i, 0) = rng.normal();
    pts(i, 1) = rng.normal();
  }
  CHECK(median_heuristic(pts, 5000, 0) == median_heuristic(pts, 60, 123));

  // Above the cap the subsample is seeded and deterministic.
  const double a = median_heuristic(pts, 30, 5);
  CHECK(a == median_heuristic(pts, 30, 5));
}

TEST_CASE("median_heuristic_kernel squares the median") {
  Matrix three(3, 1);
  three << 0.0, 1.0, 3.0;
  CHECK(median_heuristic_kernel(three).width_sq == doctest::Approx(4.0));
}

}  // TEST_SUITE
