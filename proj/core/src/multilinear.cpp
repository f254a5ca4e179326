#include "slicecov/multilinear.hpp"

#include <string>

#include "slicecov/errors.hpp"
#include "slicecov/linalg.hpp"

namespace slicecov {

Matrix inv_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < b.rows(); ++j)
    for (Index k = 0; k < b.cols(); ++k)
      out.block(j * a.rows(), k * a.cols(), a.rows(), a.cols()) = b(j, k) * a;
  return out;
}

Matrix inv_kron_chain(std::span<const Matrix> mats) {
  if (mats.empty()) throw DimensionError("inv_kron_chain: empty matrix list");
  Matrix acc = mats[0];
  for (std::size_t j = 1; j < mats.size(); ++j) acc = inv_kron(acc, mats[j]);
  return acc;
}

Array mode_multiply(const Matrix& a, const Array& x, Index mode) {
  if (mode < 0 || mode >= x.order())
    throw DimensionError("mode index out of range");
  if (a.cols() != x.dim(mode))
    throw DimensionError("mode " + std::to_string(mode) + ": matrix has " +
                         std::to_string(a.cols()) + " columns, array dimension is " +
                         std::to_string(x.dim(mode)));
  std::vector<Index> out_dims = x.dims();
  out_dims[static_cast<std::size_t>(mode)] = a.rows();
  return mode_fold(a * mode_unfold(x, mode), mode, std::move(out_dims));
}

Array rmatmul(std::span<const Matrix> mats, const Array& x) {
  if (static_cast<Index>(mats.size()) != x.order())
    throw DimensionError("rmatmul: need exactly one matrix per mode");
  Array acc = x;
  for (Index j = 0; j < x.order(); ++j)
    acc = mode_multiply(mats[static_cast<std::size_t>(j)], acc, j);
  return acc;
}

Matrix l_inverse(const Matrix& a) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < a.cols())
    throw NumericalError("l_inverse: matrix is rank deficient (rank " +
                         std::to_string(qr.rank()) + " of " + std::to_string(a.cols()) + ")");
  return qr.solve(Matrix::Identity(a.rows(), a.rows()));
}

Array array_ls_solve(std::span<const Matrix> mats, const Array& y) {
  if (static_cast<Index>(mats.size()) != y.order())
    throw DimensionError("array_ls_solve: need exactly one matrix per mode");
  std::vector<Matrix> pinvs;
  pinvs.reserve(mats.size());
  for (const Matrix& a : mats) pinvs.push_back(l_inverse(a));
  return rmatmul(pinvs, y);
}

}  // namespace slicecov
