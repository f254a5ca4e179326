#pragma once

#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/array_normal.hpp"
#include "slicecov/flip_flop.hpp"

namespace slicecov {

/// How a p-vector becomes a multiway array: an optional variable permutation
/// followed by from_rvec into dims. Entry k of the reshaped rvec is variable
/// permutation[k] of the original vector; an empty permutation is identity.
struct SlicingPlan {
  Index p = 0;
  std::vector<Index> dims;
  std::vector<Index> permutation;
};

/// Checks prod(dims) == p and that the permutation, when present, is a
/// bijection on {0..p-1}.
void validate_plan(const SlicingPlan& plan);

/// The default plan for a bare p: the most balanced two-way factorization
/// p = m1 * m2 with m1 <= m2 and m1 maximal. Prime p degenerates to (1, p).
SlicingPlan balanced_two_way(Index p);

/// Reshapes each observation row into an array per the plan.
std::vector<Array> slice_dataset(const Matrix& data, const SlicingPlan& plan);

/// Inverse of slice_dataset; restores the N x p matrix exactly.
Matrix unslice(std::span<const Array> arrays, const SlicingPlan& plan);

struct CovarianceEstimate {
  ArrayNormalModel model;
  SlicingPlan plan;
  FitReport report;
};

/// Slices the data and fits the array-normal model (sparse when the config
/// carries penalties). The implied covariance of the original p-vector is
/// nonsingular whenever the fit succeeds, including N < p.
CovarianceEstimate estimate_sliced_covariance(const Matrix& data, const SlicingPlan& plan,
                                              const FlipFlopConfig& config = {});

/// Dense p x p covariance of the original (unpermuted) variables. Subject to
/// the materialization cap.
Matrix sliced_covariance(const CovarianceEstimate& est, Index cap = kDefaultDenseCap);

/// Dense p x p inverse covariance of the original variables, assembled from
/// component inverses. Subject to the materialization cap.
Matrix sliced_precision(const CovarianceEstimate& est, Index cap = kDefaultDenseCap);

/// Applies the inverse covariance to a p-vector without materializing any
/// p x p matrix: permute, reshape, apply component inverses and their
/// transposes mode-wise, restore order.
Vector apply_precision(const CovarianceEstimate& est, const Vector& v);

/// Top-k eigenpairs of the implied p x p covariance, held in factored form.
/// Eigenvectors materialize (in original variable order) only on request.
class SlicedEigen {
 public:
  SlicedEigen(KronEigen factored, std::vector<std::vector<Index>> indices,
              std::vector<Index> permutation);

  Index count() const { return static_cast<Index>(indices_.size()); }
  /// r-th largest eigenvalue, r in [0, count).
  double value(Index r) const;
  /// Materialized eigenvector for the r-th largest eigenvalue.
  Vector vector(Index r) const;
  const KronEigen& factored() const { return factored_; }
  const std::vector<std::vector<Index>>& indices() const { return indices_; }

 private:
  KronEigen factored_;
  std::vector<std::vector<Index>> indices_;
  std::vector<Index> permutation_;
};

SlicedEigen sliced_eigen(const CovarianceEstimate& est, Index top_k);

}  // namespace slicecov
