#pragma once

#include <optional>
#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/slicing.hpp"

namespace slicecov {

/// Two groups of observations over the same p variables, rows = observations.
struct TwoSampleData {
  Matrix group1;
  Matrix group2;

  Index n1() const { return group1.rows(); }
  Index n2() const { return group2.rows(); }
  Index n() const { return n1() + n2(); }
  Index p() const { return group1.cols(); }
};

void validate(const TwoSampleData& data);

/// Column means of a group; order-canonical accumulation, so row order never
/// changes the result.
Vector column_mean(const Matrix& rows);

struct FPlusResult {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

/// F CDF via the regularized incomplete beta function. Throws on nonpositive
/// dof or negative x.
double f_cdf(double x, double d1, double d2);

/// Two-sample mean test for p >= n: with d = mean1 - mean2 and r the assumed
/// rank of the structured covariance (default n - 1),
///   statistic = (p - r + 1) / r^2 * (1/n1 + 1/n2)^-1 * d' Lambda^-1 d,
/// referred to the F distribution with (r, n - r) degrees of freedom. The
/// quadratic form goes through apply_precision, so no p x p matrix is formed.
FPlusResult f_plus_test(const TwoSampleData& data, const CovarianceEstimate& est,
                        std::optional<Index> rank = std::nullopt);

enum class GroupLabel { kGroup1 = 1, kGroup2 = 2 };

/// Fisher discriminant direction w = Lambda^-1 (mean1 - mean2), matrix-free.
Vector lda_train(const TwoSampleData& data, const CovarianceEstimate& est);

/// Group 1 iff x'w > threshold; ties go to group 2.
GroupLabel lda_classify(const Vector& x, const Vector& w, double threshold = 0.0);

/// Midpoint alternative to the default zero threshold: (mean1 + mean2)'w / 2.
double midpoint_threshold(const TwoSampleData& data, const Vector& w);

/// Resubstitution error fraction over both groups.
double misclassification_rate(const TwoSampleData& data, const Vector& w,
                              double threshold = 0.0);

struct SparseLdaResult {
  /// Original column indices of the kept variables, highest variance first.
  std::vector<Index> selected;
  /// Discriminant weights over the kept variables, aligned with `selected`.
  Vector w;
  double rate = 0.0;
  CovarianceEstimate estimate;
};

/// Variance-screened sparse discriminant pipeline: ranks variables by pooled
/// sample variance (descending, ties by column index), keeps the top plan.p,
/// fits the sparse sliced covariance on them per the plan, and trains the
/// discriminant. config.penalties must be present.
SparseLdaResult sparse_lda_pipeline(const TwoSampleData& data, const SlicingPlan& plan,
                                    const FlipFlopConfig& config);

/// Leave-one-out misclassification rate: refits the covariance and weights
/// without each observation in turn. Expensive; intended for small n.
double loocv_misclassification_rate(const TwoSampleData& data, const SlicingPlan& plan,
                                    const FlipFlopConfig& config = {});

}  // namespace slicecov
