#include "slicecov/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slicecov/errors.hpp"
#include "slicecov/linalg.hpp"

namespace slicecov {

void validate(const TwoSampleData& data) {
  if (data.group1.rows() < 1 || data.group2.rows() < 1) {
    throw DimensionError("two-sample data: each group needs at least one row");
  }
  if (data.group1.cols() != data.group2.cols()) {
    throw DimensionError("two-sample data: groups disagree on variable count");
  }
}

Vector column_mean(const Matrix& rows) {
  if (rows.rows() < 1) throw DimensionError("column_mean: empty matrix");
  StableAccumulator acc(rows.cols());
  for (Index r = 0; r < rows.rows(); ++r) {
    acc.add(rows.row(r).transpose());
  }
  return acc.sum() / static_cast<double>(rows.rows());
}

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function, modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta: continued fraction did not converge");
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double f_cdf(double x, double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0) {
    throw DimensionError("f_cdf: degrees of freedom must be positive");
  }
  if (x < 0.0) throw DimensionError("f_cdf: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double t = d1 * x / (d1 * x + d2);
  return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, t);
}

FPlusResult f_plus_test(const TwoSampleData& data, const CovarianceEstimate& est,
                        std::optional<Index> rank) {
  validate(data);
  const Index p = data.p();
  const Index n = data.n();
  if (p != est.plan.p) {
    throw DimensionError("f_plus_test: estimate plan does not match data dimension");
  }
  if (p < n) {
    throw DimensionError("f_plus_test: requires p >= n (got p = " + std::to_string(p) +
                         ", n = " + std::to_string(n) + ")");
  }
  const Index r = rank.value_or(n - 1);
  if (r < 1) throw DimensionError("f_plus_test: rank must be positive");
  if (n - r <= 0) {
    throw DimensionError("f_plus_test: degenerate denominator dof n - r = " +
                         std::to_string(n - r));
  }

  const Vector diff = column_mean(data.group1) - column_mean(data.group2);
  const double quad = diff.dot(apply_precision(est, diff));
  const double n1 = static_cast<double>(data.n1());
  const double n2 = static_cast<double>(data.n2());
  const double rd = static_cast<double>(r);
  const double factor =
      (static_cast<double>(p) - rd + 1.0) / (rd * rd) / (1.0 / n1 + 1.0 / n2);

  FPlusResult out;
  out.statistic = factor * quad;
  out.df1 = rd;
  out.df2 = static_cast<double>(n - r);
  out.p_value = 1.0 - f_cdf(out.statistic, out.df1, out.df2);
  return out;
}

Vector lda_train(const TwoSampleData& data, const CovarianceEstimate& est) {
  validate(data);
  if (data.p() != est.plan.p) {
    throw DimensionError("lda_train: estimate plan does not match data dimension");
  }
  return apply_precision(est, column_mean(data.group1) - column_mean(data.group2));
}

GroupLabel lda_classify(const Vector& x, const Vector& w, double threshold) {
  if (x.size() != w.size()) {
    throw DimensionError("lda_classify: vector lengths differ");
  }
  return x.dot(w) > threshold ? GroupLabel::kGroup1 : GroupLabel::kGroup2;
}

double midpoint_threshold(const TwoSampleData& data, const Vector& w) {
  validate(data);
  return 0.5 * (column_mean(data.group1) + column_mean(data.group2)).dot(w);
}

double misclassification_rate(const TwoSampleData& data, const Vector& w,
                              double threshold) {
  validate(data);
  Index errors = 0;
  for (Index r = 0; r < data.n1(); ++r) {
    if (lda_classify(data.group1.row(r).transpose(), w, threshold) !=
        GroupLabel::kGroup1) {
      ++errors;
    }
  }
  for (Index r = 0; r < data.n2(); ++r) {
    if (lda_classify(data.group2.row(r).transpose(), w, threshold) !=
        GroupLabel::kGroup2) {
      ++errors;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(data.n());
}

namespace {

Matrix stack_groups(const TwoSampleData& data) {
  Matrix all(data.n(), data.p());
  all.topRows(data.n1()) = data.group1;
  all.bottomRows(data.n2()) = data.group2;
  return all;
}

Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Index>(j)) = m.col(cols[j]);
  }
  return out;
}

Matrix drop_row(const Matrix& m, Index row) {
  Matrix out(m.rows() - 1, m.cols());
  out.topRows(row) = m.topRows(row);
  out.bottomRows(m.rows() - 1 - row) = m.bottomRows(m.rows() - 1 - row);
  return out;
}

}  // namespace

SparseLdaResult sparse_lda_pipeline(const TwoSampleData& data, const SlicingPlan& plan,
                                    const FlipFlopConfig& config) {
  validate(data);
  validate_plan(plan);
  if (config.penalties.empty()) {
    throw DimensionError("sparse_lda_pipeline: config.penalties must be set");
  }
  if (plan.p > data.p()) {
    throw DimensionError("sparse_lda_pipeline: plan keeps more variables than exist");
  }

  // Pooled per-variable sample variance around the grand mean.
  const Matrix all = stack_groups(data);
  const Vector grand = column_mean(all);
  const double denom = static_cast<double>(data.n() - 1);
  if (denom <= 0.0) {
    throw DimensionError("sparse_lda_pipeline: need at least two observations");
  }
  std::vector<double> variance(static_cast<size_t>(data.p()));
  for (Index j = 0; j < data.p(); ++j) {
    std::vector<double> squares;
    squares.reserve(static_cast<size_t>(data.n()));
    for (Index r = 0; r < all.rows(); ++r) {
      const double dev = all(r, j) - grand(j);
      squares.push_back(dev * dev);
    }
    variance[static_cast<size_t>(j)] = stable_sum(std::move(squares)) / denom;
  }

  std::vector<Index> order(static_cast<size_t>(data.p()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return variance[static_cast<size_t>(a)] > variance[static_cast<size_t>(b)];
  });
  order.resize(static_cast<size_t>(plan.p));

  TwoSampleData reduced{select_columns(data.group1, order),
                        select_columns(data.group2, order)};
  CovarianceEstimate est =
      estimate_sliced_covariance(stack_groups(reduced), plan, config);
  Vector w = lda_train(reduced, est);
  const double rate = misclassification_rate(reduced, w);
  return SparseLdaResult{std::move(order), std::move(w), rate, std::move(est)};
}

double loocv_misclassification_rate(const TwoSampleData& data, const SlicingPlan& plan,
                                    const FlipFlopConfig& config) {
  validate(data);
  Index errors = 0;
  for (Index r = 0; r < data.n1(); ++r) {
    TwoSampleData fold{drop_row(data.group1, r), data.group2};
    CovarianceEstimate est =
        estimate_sliced_covariance(stack_groups(fold), plan, config);
    const Vector w = lda_train(fold, est);
    if (lda_classify(data.group1.row(r).transpose(), w) != GroupLabel::kGroup1) {
      ++errors;
    }
  }
  for (Index r = 0; r < data.n2(); ++r) {
    TwoSampleData fold{data.group1, drop_row(data.group2, r)};
    CovarianceEstimate est =
        estimate_sliced_covariance(stack_groups(fold), plan, config);
    const Vector w = lda_train(fold, est);
    if (lda_classify(data.group2.row(r).transpose(), w) != GroupLabel::kGroup2) {
      ++errors;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(data.n());
}

}  // namespace slicecov
