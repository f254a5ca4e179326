#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/rng.hpp"

namespace testhelp {

using slicecov::Index;
using slicecov::Matrix;
using slicecov::Vector;

inline Matrix random_matrix(slicecov::Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  }
  return m;
}

inline Matrix random_spd(slicecov::Rng& rng, Index n, double ridge = 0.5) {
  const Matrix b = random_matrix(rng, n, n);
  return b * b.transpose() / static_cast<double>(n) +
         ridge * Matrix::Identity(n, n);
}

inline slicecov::Array random_array(slicecov::Rng& rng, std::vector<Index> dims) {
  slicecov::Array x(dims);
  for (Index k = 0; k < x.size(); ++k) x[k] = rng.normal();
  return x;
}

// Multivariate normal log-density evaluated directly from the dense
// covariance, independent of the array-based code path.
inline double dense_mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
  const Eigen::LLT<Matrix> llt(cov);
  const Vector centered = x - mean;
  const Vector solved = llt.solve(centered);
  double log_det = 0.0;
  for (Index i = 0; i < cov.rows(); ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const double d = static_cast<double>(cov.rows());
  return -0.5 * centered.dot(solved) - 0.5 * log_det -
         0.5 * d * std::log(2.0 * std::numbers::pi);
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline std::vector<double> sorted_asc(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace testhelp
