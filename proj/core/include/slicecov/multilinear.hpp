#pragma once

#include <span>
#include <vector>

#include "slicecov/array.hpp"

namespace slicecov {

/// Inverse Kronecker product of a (p x q) and b (r x s): the pr x qs matrix
/// whose (j,k) block is a * b(j,k), i.e. the ordinary Kronecker product
/// b (x) a.
Matrix inv_kron(const Matrix& a, const Matrix& b);

/// Left fold of inv_kron over a list: mats[0] inv_kron mats[1] inv_kron ...
/// Equals the ordinary Kronecker product chain in reversed order.
Matrix inv_kron_chain(std::span<const Matrix> mats);

/// Multiplies one matrix into one mode: unfold along `mode`, left-multiply,
/// refold. a must have x.dim(mode) columns; the result replaces that
/// dimension with a.rows().
Array mode_multiply(const Matrix& a, const Array& x, Index mode);

/// Simultaneous multiplication of x by one matrix per mode (mats[j] applied
/// in mode j). Equivalent, on rvec, to multiplication by the inv_kron chain
/// of mats.
Array rmatmul(std::span<const Matrix> mats, const Array& x);

/// The l-inverse (a'a)^-1 a' of a matrix with full column rank.
Matrix l_inverse(const Matrix& a);

/// Least-squares solution of rmatmul(mats, X) ~ y when every mats[j] has
/// full column rank: applies the l-inverse of each matrix per mode. The
/// residual sq_norm(y - rmatmul(mats, X)) is minimal over all X.
Array array_ls_solve(std::span<const Matrix> mats, const Array& y);

}  // namespace slicecov
