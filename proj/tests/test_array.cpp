#include <doctest.h>

#include <array>
#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/errors.hpp"
#include "slicecov/linalg.hpp"
#include "test_helpers.hpp"

using namespace slicecov;
using testhelp::random_array;
using testhelp::random_matrix;
using testhelp::random_spd;

TEST_SUITE("array-core") {

TEST_CASE("rvec stacks with the first index fastest") {
  Array x({2, 2});
  x.at(std::array<Index, 2>{0, 0}) = 1;
  x.at(std::array<Index, 2>{1, 0}) = 2;
  x.at(std::array<Index, 2>{0, 1}) = 3;
  x.at(std::array<Index, 2>{1, 1}) = 4;
  const Vector v = rvec(x);
  REQUIRE(v.size() == 4);
  CHECK(v(0) == 1);
  CHECK(v(1) == 2);
  CHECK(v(2) == 3);
  CHECK(v(3) == 4);
}

TEST_CASE("rvec of a one-way array is the identity") {
  Array x({2});
  x[0] = 5;
  x[1] = 7;
  const Vector v = rvec(x);
  CHECK(v(0) == 5);
  CHECK(v(1) == 7);
}

TEST_CASE("flat index enumerates a 2x2x2 array as a bijection") {
  const std::vector<Index> dims{2, 2, 2};
  Array x(dims);
  // 1-based position (2,1,2) lands at 1-based index 6.
  CHECK(x.flat_index(std::array<Index, 3>{1, 0, 1}) == 5);

  std::vector<bool> hit(8, false);
  for (Index j3 = 0; j3 < 2; ++j3) {
    for (Index j2 = 0; j2 < 2; ++j2) {
      for (Index j1 = 0; j1 < 2; ++j1) {
        const Index flat = x.flat_index(std::array<Index, 3>{j1, j2, j3});
        CHECK(flat == j1 + 2 * j2 + 4 * j3);
        REQUIRE(flat >= 0);
        REQUIRE(flat < 8);
        CHECK_FALSE(hit[static_cast<size_t>(flat)]);
        hit[static_cast<size_t>(flat)] = true;
      }
    }
  }
}

TEST_CASE("from_rvec inverts rvec") {
  const Vector v = (Vector(4) << 1, 2, 3, 4).finished();
  const Array x = from_rvec(v, {2, 2});
  CHECK(x.at(std::array<Index, 2>{1, 0}) == 2);

  SUBCASE("scalar array") {
    const Array s = from_rvec((Vector(1) << 9).finished(), {1, 1, 1});
    CHECK(s[0] == 9);
  }

  SUBCASE("random round trip is bitwise") {
    Rng rng(11);
    Vector r(24);
    for (Index i = 0; i < 24; ++i) r(i) = rng.normal();
    const Vector back = rvec(from_rvec(r, {2, 3, 4}));
    for (Index i = 0; i < 24; ++i) CHECK(back(i) == r(i));
  }

  SUBCASE("length mismatch throws") {
    CHECK_THROWS_AS(from_rvec(v, {3, 2}), DimensionError);
  }
}

TEST_CASE("mode_unfold of a 2-way array is the matrix and its transpose") {
  Rng rng(12);
  const Array x = random_array(rng, {2, 3});
  const Matrix u0 = mode_unfold(x, 0);
  const Matrix u1 = mode_unfold(x, 1);
  REQUIRE(u0.rows() == 2);
  REQUIRE(u0.cols() == 3);
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 3; ++c) {
      CHECK(u0(r, c) == x.at(std::array<Index, 2>{r, c}));
      CHECK(u1(c, r) == x.at(std::array<Index, 2>{r, c}));
    }
  }
}

TEST_CASE("mode_unfold places the chosen mode on rows, rest in rvec order") {
  Rng rng(13);
  const Array x = random_array(rng, {2, 2, 2});
  const Matrix u = mode_unfold(x, 2);
  REQUIRE(u.rows() == 2);
  REQUIRE(u.cols() == 4);
  for (Index j3 = 0; j3 < 2; ++j3) {
    for (Index j2 = 0; j2 < 2; ++j2) {
      for (Index j1 = 0; j1 < 2; ++j1) {
        CHECK(u(j3, j1 + 2 * j2) == x.at(std::array<Index, 3>{j1, j2, j3}));
      }
    }
  }

  SUBCASE("fold inverts unfold on every mode") {
    const Array y = random_array(rng, {2, 3, 4});
    for (Index mode = 0; mode < 3; ++mode) {
      const Array back = mode_fold(mode_unfold(y, mode), mode, {2, 3, 4});
      for (Index k = 0; k < y.size(); ++k) CHECK(back[k] == y[k]);
    }
  }

  SUBCASE("mode out of range throws") {
    CHECK_THROWS_AS(mode_unfold(x, 3), DimensionError);
  }
}

TEST_CASE("sq_norm and distance") {
  Array zero({2, 2});
  CHECK(sq_norm(zero) == 0.0);

  const Array x = from_rvec((Vector(4) << 1, 2, 3, 4).finished(), {2, 2});
  CHECK(sq_norm(x) == doctest::Approx(30.0).epsilon(1e-15));
  CHECK(distance(x, x) == 0.0);

  Rng rng(14);
  const Array a = random_array(rng, {3, 2});
  CHECK(distance(a, a) == 0.0);
  CHECK_THROWS_AS(distance(a, zero), DimensionError);
}

TEST_CASE("spd_sqrt squares back to the input") {
  CHECK((spd_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  const Matrix r = spd_sqrt(d);
  CHECK(r(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(r(0, 1)) < 1e-14);

  Rng rng(15);
  const Matrix s = random_spd(rng, 5);
  const Matrix a = spd_sqrt(s);
  CHECK((a - a.transpose()).norm() < 1e-12 * a.norm());
  CHECK((a * a - s).norm() / s.norm() < 1e-10);

  SUBCASE("rejects asymmetric input") {
    Matrix bad = s;
    bad(0, 1) += 1.0;
    CHECK_THROWS_AS(spd_sqrt(bad), NumericalError);
  }
  SUBCASE("rejects indefinite input") {
    Matrix indef = Matrix::Identity(2, 2);
    indef(1, 1) = -1.0;
    CHECK_THROWS_AS(spd_sqrt(indef), NumericalError);
  }
}

TEST_CASE("stable_sum is order-canonical") {
  std::vector<double> values{1e16, 1.0, -1e16, 3.0, 0.5};
  const double a = stable_sum(values);
  std::vector<double> shuffled{3.0, -1e16, 0.5, 1e16, 1.0};
  const double b = stable_sum(shuffled);
  CHECK(a == b);

  StableAccumulator acc(2);
  StableAccumulator rev(2);
  const Vector v1 = (Vector(2) << 1e16, 2.0).finished();
  const Vector v2 = (Vector(2) << 1.0, -2.0).finished();
  const Vector v3 = (Vector(2) << -1e16, 0.25).finished();
  acc.add(v1);
  acc.add(v2);
  acc.add(v3);
  rev.add(v3);
  rev.add(v1);
  rev.add(v2);
  const Vector s1 = acc.sum();
  const Vector s2 = rev.sum();
  CHECK(s1(0) == s2(0));
  CHECK(s1(1) == s2(1));
}

}  // TEST_SUITE
