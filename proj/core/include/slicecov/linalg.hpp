#pragma once

#include <vector>

#include "slicecov/array.hpp"

namespace slicecov {

/// Symmetric positive definite square root via eigendecomposition. Input must
/// be symmetric with smallest eigenvalue above 1e-12 times the largest.
/// The result A is symmetric and satisfies A*A = s.
Matrix spd_sqrt(const Matrix& s);

/// Relative asymmetry ||s - s'||_max / max(1, ||s||_max).
double asymmetry(const Matrix& s);

/// 0.5 * (m + m').
Matrix symmetrize(const Matrix& m);

/// log|det(a)| via LU; throws NumericalError when a is singular.
double log_abs_det(const Matrix& a);

/// Inverse with an explicit invertibility check.
Matrix checked_inverse(const Matrix& a, const char* context);

/// Sums values in a canonical order (ascending |x|, ties broken by sign), so
/// the result depends only on the multiset of inputs, not their order.
double stable_sum(std::vector<double> values);

/// Entrywise order-invariant accumulator for a sequence of equally sized
/// vectors: sum() applies stable_sum per entry, so accumulating the same
/// contributions in any order yields bitwise-identical results.
class StableAccumulator {
 public:
  explicit StableAccumulator(Index n);

  void add(const Vector& contribution);
  Index count() const { return count_; }
  Vector sum() const;

 private:
  std::vector<std::vector<double>> cells_;
  Index count_ = 0;
};

}  // namespace slicecov
