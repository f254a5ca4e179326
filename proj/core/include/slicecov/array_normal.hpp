#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slicecov/array.hpp"

namespace slicecov {

/// Array-variate normal parameters: mean array M and one square component
/// matrix A_j per mode. The covariance of rvec(X) is the inverse-Kronecker
/// chain of the components times its transpose.
struct ArrayNormalModel {
  Array mean;
  std::vector<Matrix> components;

  Index order() const { return mean.order(); }
  Index size() const { return mean.size(); }
};

inline constexpr Index kDefaultDenseCap = 4096;

/// Checks component count, squareness, and order agreement with the mean dims.
void validate(const ArrayNormalModel& model);

/// Inverse of each component; throws NumericalError on a singular component.
std::vector<Matrix> component_inverses(const ArrayNormalModel& model);

/// Log-density of one observation under the model.
double log_density(const ArrayNormalModel& model, const Array& x);

/// Sum of log_density over samples. Uses an order-canonical sum, so permuting
/// the sample list leaves the result bitwise unchanged.
double log_likelihood(const ArrayNormalModel& model, std::span<const Array> samples);

/// Draws n observations X = M + (A_1)^1 ... (A_i)^i E with E iid standard
/// normal, from the deterministic stream for `seed`.
std::vector<Array> sample(const ArrayNormalModel& model, std::uint64_t seed, Index n);

/// Dense d x d covariance of rvec(X). Refuses d > cap.
Matrix full_covariance(const ArrayNormalModel& model, Index cap = kDefaultDenseCap);

/// Dense d x d inverse covariance assembled from component inverses, never by
/// inverting the dense covariance. Refuses d > cap.
Matrix precision(const ArrayNormalModel& model, Index cap = kDefaultDenseCap);

/// Eigenstructure of the covariance in factored form: per mode j, the
/// eigenvalues and eigenvectors of A_jA_j'. Full eigenvalues are products
/// across modes and full eigenvectors are inverse-Kronecker chains of the
/// mode vectors; both materialize only on request.
class KronEigen {
 public:
  KronEigen(std::vector<Vector> mode_values, std::vector<Matrix> mode_vectors);

  Index order() const { return static_cast<Index>(mode_values_.size()); }
  Index size() const { return size_; }
  const std::vector<Vector>& mode_values() const { return mode_values_; }
  const std::vector<Matrix>& mode_vectors() const { return mode_vectors_; }

  /// Eigenvalue for one choice of per-mode indices (0-based).
  double value_at(std::span<const Index> multi) const;

  /// Materialized length-d eigenvector for one choice of per-mode indices.
  Vector vector_at(std::span<const Index> multi) const;

  /// All d eigenvalue products, in rvec order of the multi-index.
  std::vector<double> all_values() const;

  /// Multi-indices of the k largest eigenvalues, in descending value order;
  /// ties broken by rvec position for determinism.
  std::vector<std::vector<Index>> top_indices(Index k) const;

  /// Sum of log eigenvalues = log det of the covariance.
  double log_det() const;

 private:
  std::vector<Vector> mode_values_;
  std::vector<Matrix> mode_vectors_;
  std::vector<Index> dims_;
  Index size_ = 1;
};

KronEigen kron_eigen(const ArrayNormalModel& model);

}  // namespace slicecov
