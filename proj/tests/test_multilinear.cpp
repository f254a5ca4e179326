#include <doctest.h>

#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/errors.hpp"
#include "slicecov/multilinear.hpp"
#include "test_helpers.hpp"

using namespace slicecov;
using testhelp::random_array;
using testhelp::random_matrix;
using testhelp::sorted_asc;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Ordinary Kronecker product, used as the oracle for inv_kron.
Matrix ordinary_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("multilinear") {

TEST_CASE("inv_kron hand examples") {
  const Matrix a = mat2(1, 2, 3, 4);

  SUBCASE("identity on the right gives a block diagonal") {
    const Matrix k = inv_kron(a, Matrix::Identity(2, 2));
    Matrix expected = Matrix::Zero(4, 4);
    expected.block(0, 0, 2, 2) = a;
    expected.block(2, 2, 2, 2) = a;
    CHECK((k - expected).norm() == 0.0);
  }

  SUBCASE("swap matrix on the right") {
    const Matrix b = mat2(0, 1, 1, 0);
    const Matrix k = inv_kron(a, b);
    Matrix expected(4, 4);
    expected << 0, 0, 1, 2,
                0, 0, 3, 4,
                1, 2, 0, 0,
                3, 4, 0, 0;
    CHECK((k - expected).norm() == 0.0);
  }

  SUBCASE("equals the reversed ordinary Kronecker product") {
    Rng rng(21);
    const Matrix p = random_matrix(rng, 2, 3);
    const Matrix q = random_matrix(rng, 3, 2);
    CHECK((inv_kron(p, q) - ordinary_kron(q, p)).norm() == 0.0);
  }
}

TEST_CASE("inv_kron algebra on random matrices") {
  Rng rng(22);
  const Index n = 3;
  const Index m = 4;
  const Matrix a1 = random_matrix(rng, n, n);
  const Matrix a2 = random_matrix(rng, n, n);
  const Matrix b1 = random_matrix(rng, m, m);
  const Matrix b2 = random_matrix(rng, m, m);

  SUBCASE("bilinearity") {
    const Matrix lhs = inv_kron(a1 + a2, b1);
    const Matrix rhs = inv_kron(a1, b1) + inv_kron(a2, b1);
    CHECK((lhs - rhs).norm() < 1e-10);
  }

  SUBCASE("mixed product") {
    const Matrix lhs = inv_kron(a1, b1) * inv_kron(a2, b2);
    const Matrix rhs = inv_kron(a1 * a2, b1 * b2);
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-10);
  }

  SUBCASE("inverse distributes") {
    const Matrix lhs = inv_kron(a1, b1).inverse();
    const Matrix rhs = inv_kron(a1.inverse(), b1.inverse());
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-10);
  }

  SUBCASE("determinant power law") {
    const double lhs = inv_kron(a1, b1).determinant();
    const double rhs = std::pow(a1.determinant(), static_cast<double>(m)) *
                       std::pow(b1.determinant(), static_cast<double>(n));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }

  SUBCASE("trace multiplies") {
    CHECK(inv_kron(a1, b1).trace() ==
          doctest::Approx(a1.trace() * b1.trace()).epsilon(1e-10));
  }
}

TEST_CASE("inv_kron eigenvalue product law") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 3;
  b(1, 1) = 4;
  const Matrix k = inv_kron(a, b);
  Eigen::EigenSolver<Matrix> eig(k);
  std::vector<double> got;
  for (Index i = 0; i < 4; ++i) got.push_back(eig.eigenvalues()(i).real());
  const std::vector<double> expected{3, 4, 6, 8};
  const std::vector<double> sorted = sorted_asc(got);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(sorted[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  }

  SUBCASE("random matrices, multiset comparison") {
    Rng rng(23);
    const Matrix ra = random_matrix(rng, 2, 2);
    const Matrix rb = random_matrix(rng, 3, 3);
    Eigen::EigenSolver<Matrix> ea(ra);
    Eigen::EigenSolver<Matrix> eb(rb);
    Eigen::EigenSolver<Matrix> ek(inv_kron(ra, rb));
    std::vector<double> products;
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 3; ++j) {
        products.push_back((ea.eigenvalues()(i) * eb.eigenvalues()(j)).real());
      }
    }
    std::vector<double> direct;
    for (Index i = 0; i < 6; ++i) direct.push_back(ek.eigenvalues()(i).real());
    const std::vector<double> lhs = sorted_asc(products);
    const std::vector<double> rhs = sorted_asc(direct);
    for (size_t i = 0; i < 6; ++i) {
      CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("rmatmul identity and hand example") {
  Rng rng(24);
  const Array x = random_array(rng, {2, 3, 2});
  std::vector<Matrix> ids{Matrix::Identity(2, 2), Matrix::Identity(3, 3),
                          Matrix::Identity(2, 2)};
  const Array same = rmatmul(ids, x);
  for (Index k = 0; k < x.size(); ++k) CHECK(same[k] == x[k]);

  SUBCASE("(A)^1 (B)^2 X = A X B' for 2-way arrays") {
    Matrix a(1, 2);
    a << 1, 1;
    Matrix b(1, 2);
    b << 1, -1;
    const Array xm = from_rvec((Vector(4) << 1, 3, 2, 4).finished(), {2, 2});
    // xm as a matrix (mode 0 on rows) is [[1,2],[3,4]].
    CHECK(mode_unfold(xm, 0)(0, 1) == 2);
    std::vector<Matrix> mats{a, b};
    const Array y = rmatmul(mats, xm);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == doctest::Approx(-2.0).epsilon(1e-15));
  }
}

TEST_CASE("rmatmul matches the inverse Kronecker chain on rvec") {
  Rng rng(25);
  const std::vector<std::vector<Index>> shapes{{2, 3}, {3, 2, 2}, {2, 2, 2, 2}, {4}};
  for (const auto& dims : shapes) {
    const Array x = random_array(rng, dims);
    std::vector<Matrix> mats;
    for (Index m : dims) mats.push_back(random_matrix(rng, m, m));
    const Vector lhs = rvec(rmatmul(mats, x));
    const Vector rhs = inv_kron_chain(mats) * rvec(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("rectangular matrices change mode sizes") {
    const Array x = random_array(rng, {2, 3});
    std::vector<Matrix> mats{random_matrix(rng, 4, 2), random_matrix(rng, 1, 3)};
    const Array y = rmatmul(mats, x);
    REQUIRE(y.dims() == std::vector<Index>{4, 1});
    const Vector rhs = inv_kron_chain(mats) * rvec(x);
    CHECK((rvec(y) - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("dimension mismatch throws") {
    const Array x = random_array(rng, {2, 3});
    std::vector<Matrix> bad{random_matrix(rng, 2, 3), random_matrix(rng, 3, 3)};
    CHECK_THROWS_AS(rmatmul(bad, x), DimensionError);
  }
}

TEST_CASE("rmatmul composes like per-mode matrix products") {
  Rng rng(26);
  const Array x = random_array(rng, {2, 3, 2});
  std::vector<Matrix> first;
  std::vector<Matrix> second;
  std::vector<Matrix> combined;
  const std::vector<Index> dims{2, 3, 2};
  for (Index m : dims) {
    const Matrix f = random_matrix(rng, m, m);
    const Matrix s = random_matrix(rng, m, m);
    first.push_back(f);
    second.push_back(s);
    combined.push_back(f * s);
  }
  const Array twice = rmatmul(first, rmatmul(second, x));
  const Array once = rmatmul(combined, x);
  CHECK((rvec(twice) - rvec(once)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("l_inverse") {
  SUBCASE("square invertible matrices give the inverse") {
    Rng rng(27);
    const Matrix a = random_matrix(rng, 3, 3);
    CHECK((l_inverse(a) - a.inverse()).norm() < 1e-10);
  }

  SUBCASE("tall ones-vector example") {
    Matrix a(2, 1);
    a << 1, 1;
    const Matrix li = l_inverse(a);
    REQUIRE(li.rows() == 1);
    REQUIRE(li.cols() == 2);
    CHECK(li(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(li(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("random tall full-rank matrix") {
    Rng rng(28);
    const Matrix a = random_matrix(rng, 5, 3);
    CHECK((l_inverse(a) * a - Matrix::Identity(3, 3)).norm() < 1e-10);
  }

  SUBCASE("rank-deficient input throws") {
    Matrix a(3, 2);
    a << 1, 2, 2, 4, 3, 6;
    CHECK_THROWS_AS(l_inverse(a), NumericalError);
  }
}

TEST_CASE("array_ls_solve") {
  Rng rng(29);

  SUBCASE("square invertible mats recover exactly") {
    const Array y = random_array(rng, {2, 3});
    std::vector<Matrix> mats{random_matrix(rng, 2, 2), random_matrix(rng, 3, 3)};
    const Array x = array_ls_solve(mats, y);
    const Array back = rmatmul(mats, x);
    CHECK((rvec(back) - rvec(y)).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("matches dense least squares for tall mats") {
    const Array y = random_array(rng, {4, 3});
    std::vector<Matrix> mats{random_matrix(rng, 4, 2), random_matrix(rng, 3, 2)};
    const Array x = array_ls_solve(mats, y);
    const Matrix design = inv_kron_chain(mats);
    const Vector dense =
        design.colPivHouseholderQr().solve(rvec(y));
    CHECK((rvec(x) - dense).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("noiseless recovery") {
    const Array x0 = random_array(rng, {2, 2});
    std::vector<Matrix> mats{random_matrix(rng, 3, 2), random_matrix(rng, 4, 2)};
    const Array y = rmatmul(mats, x0);
    const Array x = array_ls_solve(mats, y);
    CHECK((rvec(x) - rvec(x0)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

}  // TEST_SUITE
