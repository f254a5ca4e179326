#include "slicecov/array.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "slicecov/errors.hpp"

namespace slicecov {

namespace {

Index checked_size(const std::vector<Index>& dims) {
  if (dims.empty()) throw DimensionError("array must have order >= 1");
  Index n = 1;
  for (Index m : dims) {
    if (m < 1) throw DimensionError("array dimensions must be >= 1");
    n *= m;
  }
  return n;
}

void require_same_dims(const Array& a, const Array& b, const char* op) {
  if (a.dims() != b.dims())
    throw DimensionError(std::string(op) + ": operand dimensions differ");
}

}  // namespace

Array::Array(std::vector<Index> dims) : dims_(std::move(dims)) {
  data_ = Vector::Zero(checked_size(dims_));
}

Array::Array(std::vector<Index> dims, Vector data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (checked_size(dims_) != data_.size())
    throw DimensionError("data length does not match product of dimensions");
}

Index Array::flat_index(std::span<const Index> index) const {
  if (static_cast<Index>(index.size()) != order())
    throw DimensionError("multi-index order does not match array order");
  Index flat = 0;
  Index stride = 1;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (index[j] < 0 || index[j] >= dims_[j])
      throw DimensionError("multi-index out of range in mode " + std::to_string(j));
    flat += index[j] * stride;
    stride *= dims_[j];
  }
  return flat;
}

Array& Array::operator+=(const Array& other) {
  require_same_dims(*this, other, "array addition");
  data_ += other.data_;
  return *this;
}

Array& Array::operator-=(const Array& other) {
  require_same_dims(*this, other, "array subtraction");
  data_ -= other.data_;
  return *this;
}

Array& Array::operator*=(double scale) {
  data_ *= scale;
  return *this;
}

Array operator+(Array lhs, const Array& rhs) { return lhs += rhs; }
Array operator-(Array lhs, const Array& rhs) { return lhs -= rhs; }
Array operator*(double scale, Array x) { return x *= scale; }

Vector rvec(const Array& x) { return x.raw(); }

Array from_rvec(const Vector& v, std::vector<Index> dims) {
  return Array(std::move(dims), v);
}

Matrix mode_unfold(const Array& x, Index mode) {
  if (mode < 0 || mode >= x.order())
    throw DimensionError("mode index out of range");
  Index stride = 1;  // product of dims before `mode`
  for (Index k = 0; k < mode; ++k) stride *= x.dim(k);
  const Index m = x.dim(mode);
  const Index outer = x.size() / (stride * m);

  Matrix u(m, x.size() / m);
  for (Index o = 0; o < outer; ++o)
    for (Index s = 0; s < stride; ++s) {
      const Index col = o * stride + s;
      const Index base = o * stride * m + s;
      for (Index r = 0; r < m; ++r) u(r, col) = x[base + r * stride];
    }
  return u;
}

Array mode_fold(const Matrix& u, Index mode, std::vector<Index> dims) {
  Array out(std::move(dims));
  if (mode < 0 || mode >= out.order())
    throw DimensionError("mode index out of range");
  Index stride = 1;
  for (Index k = 0; k < mode; ++k) stride *= out.dim(k);
  const Index m = out.dim(mode);
  if (u.rows() != m || u.cols() != out.size() / m)
    throw DimensionError("unfolded matrix shape does not match target dims");
  const Index outer = out.size() / (stride * m);

  for (Index o = 0; o < outer; ++o)
    for (Index s = 0; s < stride; ++s) {
      const Index col = o * stride + s;
      const Index base = o * stride * m + s;
      for (Index r = 0; r < m; ++r) out[base + r * stride] = u(r, col);
    }
  return out;
}

double sq_norm(const Array& x) { return x.raw().squaredNorm(); }

double distance(const Array& x1, const Array& x2) {
  require_same_dims(x1, x2, "distance");
  return (x1.raw() - x2.raw()).norm();
}

}  // namespace slicecov
