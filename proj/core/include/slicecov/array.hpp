#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace slicecov {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real multiway array of order i >= 1 with dimensions (m_1, ..., m_i).
///
/// Elements are stored in rvec order: the first index varies fastest, the
/// last slowest (the generalization of column-major storage). The flat
/// position of the 0-based multi-index (j_1, ..., j_i) is
///   j_1 + j_2*m_1 + j_3*m_1*m_2 + ...
class Array {
 public:
  Array() = default;

  /// Zero-filled array of the given dimensions.
  explicit Array(std::vector<Index> dims);

  /// Wraps existing data (must have length prod(dims)) without reordering.
  Array(std::vector<Index> dims, Vector data);

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim(Index mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  Index size() const { return data_.size(); }

  double operator[](Index flat) const { return data_[flat]; }
  double& operator[](Index flat) { return data_[flat]; }

  /// Element access by 0-based multi-index.
  double at(std::span<const Index> index) const { return data_[flat_index(index)]; }
  double& at(std::span<const Index> index) { return data_[flat_index(index)]; }

  /// Flat position of a 0-based multi-index, first index fastest.
  Index flat_index(std::span<const Index> index) const;

  /// The underlying storage, which is exactly rvec(*this).
  const Vector& raw() const { return data_; }
  Vector& raw() { return data_; }

  Array& operator+=(const Array& other);
  Array& operator-=(const Array& other);
  Array& operator*=(double scale);

 private:
  std::vector<Index> dims_;
  Vector data_;
};

Array operator+(Array lhs, const Array& rhs);
Array operator-(Array lhs, const Array& rhs);
Array operator*(double scale, Array x);

/// Stacks the elements of the array into a column vector, first index
/// varying fastest. Inverse of from_rvec given the same dims.
Vector rvec(const Array& x);

/// Reassembles an array of the given dimensions from its rvec.
Array from_rvec(const Vector& v, std::vector<Index> dims);

/// Matricization placing `mode` (0-based) on the rows. Columns run over the
/// remaining modes in rvec order (earlier modes fastest). For a 2-way array,
/// mode 0 gives the array viewed as a matrix and mode 1 its transpose.
Matrix mode_unfold(const Array& x, Index mode);

/// Inverse of mode_unfold: refolds an m_mode x (prod of the rest) matrix
/// into an array with the given dims.
Array mode_fold(const Matrix& u, Index mode, std::vector<Index> dims);

/// Sum of squared elements.
double sq_norm(const Array& x);

/// Euclidean distance sqrt(sq_norm(x1 - x2)); dims must match.
double distance(const Array& x1, const Array& x2);

}  // namespace slicecov
