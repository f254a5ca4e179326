#include "slicecov/array_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "slicecov/errors.hpp"
#include "slicecov/linalg.hpp"
#include "slicecov/multilinear.hpp"
#include "slicecov/rng.hpp"

namespace slicecov {

void validate(const ArrayNormalModel& model) {
  const auto& dims = model.mean.dims();
  if (model.components.size() != dims.size()) {
    throw DimensionError("model: expected " + std::to_string(dims.size()) +
                         " components, got " + std::to_string(model.components.size()));
  }
  for (size_t j = 0; j < dims.size(); ++j) {
    const Matrix& a = model.components[j];
    if (a.rows() != a.cols() || a.rows() != dims[j]) {
      throw DimensionError("model: component " + std::to_string(j + 1) + " must be " +
                           std::to_string(dims[j]) + "x" + std::to_string(dims[j]));
    }
  }
}

std::vector<Matrix> component_inverses(const ArrayNormalModel& model) {
  validate(model);
  std::vector<Matrix> inverses;
  inverses.reserve(model.components.size());
  for (size_t j = 0; j < model.components.size(); ++j) {
    const std::string ctx = "model component " + std::to_string(j + 1);
    inverses.push_back(checked_inverse(model.components[j], ctx.c_str()));
  }
  return inverses;
}

double log_density(const ArrayNormalModel& model, const Array& x) {
  if (x.dims() != model.mean.dims()) {
    throw DimensionError("log_density: observation dims do not match model");
  }
  const auto inverses = component_inverses(model);
  Array centered = x;
  centered -= model.mean;
  const Array residual = rmatmul(inverses, centered);
  const double d = static_cast<double>(model.size());

  double log_det_sum = 0.0;
  for (size_t j = 0; j < model.components.size(); ++j) {
    const double cofactor = d / static_cast<double>(model.mean.dim(static_cast<Index>(j)));
    log_det_sum += cofactor * log_abs_det(model.components[j]);
  }
  return -0.5 * sq_norm(residual) - 0.5 * d * std::log(2.0 * std::numbers::pi) -
         log_det_sum;
}

double log_likelihood(const ArrayNormalModel& model, std::span<const Array> samples) {
  std::vector<double> terms;
  terms.reserve(samples.size());
  for (const Array& x : samples) terms.push_back(log_density(model, x));
  return stable_sum(std::move(terms));
}

std::vector<Array> sample(const ArrayNormalModel& model, std::uint64_t seed, Index n) {
  validate(model);
  if (n < 1) throw DimensionError("sample: n must be at least 1");
  Rng rng(seed);
  std::vector<Array> out;
  out.reserve(static_cast<size_t>(n));
  for (Index l = 0; l < n; ++l) {
    Array noise(model.mean.dims());
    for (Index k = 0; k < noise.size(); ++k) noise.raw()(k) = rng.normal();
    Array x = rmatmul(model.components, noise);
    x += model.mean;
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

void check_cap(const ArrayNormalModel& model, Index cap, const char* op) {
  if (model.size() > cap) {
    throw DimensionError(std::string(op) + ": dimension " + std::to_string(model.size()) +
                         " exceeds materialization cap " + std::to_string(cap));
  }
}

}  // namespace

Matrix full_covariance(const ArrayNormalModel& model, Index cap) {
  validate(model);
  check_cap(model, cap, "full_covariance");
  const Matrix chain = inv_kron_chain(model.components);
  return chain * chain.transpose();
}

Matrix precision(const ArrayNormalModel& model, Index cap) {
  check_cap(model, cap, "precision");
  const Matrix chain = inv_kron_chain(component_inverses(model));
  return chain.transpose() * chain;
}

KronEigen::KronEigen(std::vector<Vector> mode_values, std::vector<Matrix> mode_vectors)
    : mode_values_(std::move(mode_values)), mode_vectors_(std::move(mode_vectors)) {
  if (mode_values_.empty() || mode_values_.size() != mode_vectors_.size()) {
    throw DimensionError("KronEigen: inconsistent mode data");
  }
  dims_.reserve(mode_values_.size());
  for (size_t j = 0; j < mode_values_.size(); ++j) {
    const Index m = mode_values_[j].size();
    if (mode_vectors_[j].rows() != m || mode_vectors_[j].cols() != m) {
      throw DimensionError("KronEigen: mode vector shape mismatch");
    }
    dims_.push_back(m);
    size_ *= m;
  }
}

double KronEigen::value_at(std::span<const Index> multi) const {
  if (static_cast<Index>(multi.size()) != order()) {
    throw DimensionError("KronEigen: multi-index order mismatch");
  }
  double value = 1.0;
  for (size_t j = 0; j < multi.size(); ++j) {
    if (multi[j] < 0 || multi[j] >= dims_[j]) {
      throw DimensionError("KronEigen: multi-index out of range");
    }
    value *= mode_values_[j](multi[j]);
  }
  return value;
}

Vector KronEigen::vector_at(std::span<const Index> multi) const {
  if (static_cast<Index>(multi.size()) != order()) {
    throw DimensionError("KronEigen: multi-index order mismatch");
  }
  // Entry k of the chained eigenvector is the product of per-mode vector
  // entries at k's rvec digits.
  Vector out(size_);
  std::vector<Index> digits(multi.size(), 0);
  for (Index k = 0; k < size_; ++k) {
    double value = 1.0;
    for (size_t j = 0; j < multi.size(); ++j) {
      value *= mode_vectors_[j](digits[j], multi[j]);
    }
    out(k) = value;
    for (size_t j = 0; j < digits.size(); ++j) {
      if (++digits[j] < dims_[j]) break;
      digits[j] = 0;
    }
  }
  return out;
}

std::vector<double> KronEigen::all_values() const {
  std::vector<double> values;
  values.reserve(static_cast<size_t>(size_));
  std::vector<Index> digits(dims_.size(), 0);
  for (Index k = 0; k < size_; ++k) {
    values.push_back(value_at(digits));
    for (size_t j = 0; j < digits.size(); ++j) {
      if (++digits[j] < dims_[j]) break;
      digits[j] = 0;
    }
  }
  return values;
}

std::vector<std::vector<Index>> KronEigen::top_indices(Index k) const {
  if (k < 0 || k > size_) {
    throw DimensionError("KronEigen: top_indices count out of range");
  }
  const std::vector<double> values = all_values();
  std::vector<Index> order_idx(static_cast<size_t>(size_));
  std::iota(order_idx.begin(), order_idx.end(), Index{0});
  std::stable_sort(order_idx.begin(), order_idx.end(), [&](Index a, Index b) {
    return values[static_cast<size_t>(a)] > values[static_cast<size_t>(b)];
  });

  std::vector<std::vector<Index>> out;
  out.reserve(static_cast<size_t>(k));
  for (Index r = 0; r < k; ++r) {
    Index flat = order_idx[static_cast<size_t>(r)];
    std::vector<Index> digits(dims_.size());
    for (size_t j = 0; j < dims_.size(); ++j) {
      digits[j] = flat % dims_[j];
      flat /= dims_[j];
    }
    out.push_back(std::move(digits));
  }
  return out;
}

double KronEigen::log_det() const {
  double total = 0.0;
  for (size_t j = 0; j < mode_values_.size(); ++j) {
    const double cofactor = static_cast<double>(size_ / dims_[j]);
    for (Index r = 0; r < dims_[j]; ++r) {
      const double lambda = mode_values_[j](r);
      if (lambda <= 0.0) throw NumericalError("KronEigen: nonpositive eigenvalue");
      total += cofactor * std::log(lambda);
    }
  }
  return total;
}

KronEigen kron_eigen(const ArrayNormalModel& model) {
  validate(model);
  std::vector<Vector> values;
  std::vector<Matrix> vectors;
  values.reserve(model.components.size());
  vectors.reserve(model.components.size());
  for (const Matrix& a : model.components) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(a * a.transpose()));
    if (eig.info() != Eigen::Success) {
      throw NumericalError("kron_eigen: mode eigendecomposition failed");
    }
    values.push_back(eig.eigenvalues());
    vectors.push_back(eig.eigenvectors());
  }
  return KronEigen(std::move(values), std::move(vectors));
}

}  // namespace slicecov
