#include "slicecov/slicing.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "slicecov/errors.hpp"
#include "slicecov/multilinear.hpp"

namespace slicecov {

void validate_plan(const SlicingPlan& plan) {
  if (plan.p < 1) throw DimensionError("plan: p must be positive");
  if (plan.dims.empty()) throw DimensionError("plan: dims must be nonempty");
  Index prod = 1;
  for (Index m : plan.dims) {
    if (m < 1) throw DimensionError("plan: every dim must be positive");
    prod *= m;
  }
  if (prod != plan.p) {
    throw DimensionError("plan: dims multiply to " + std::to_string(prod) +
                         ", expected p = " + std::to_string(plan.p));
  }
  if (!plan.permutation.empty()) {
    if (static_cast<Index>(plan.permutation.size()) != plan.p) {
      throw DimensionError("plan: permutation length must equal p");
    }
    std::vector<bool> seen(static_cast<size_t>(plan.p), false);
    for (Index idx : plan.permutation) {
      if (idx < 0 || idx >= plan.p || seen[static_cast<size_t>(idx)]) {
        throw DimensionError("plan: permutation is not a bijection on 0..p-1");
      }
      seen[static_cast<size_t>(idx)] = true;
    }
  }
}

SlicingPlan balanced_two_way(Index p) {
  if (p < 1) throw DimensionError("balanced_two_way: p must be positive");
  Index m1 = 1;
  for (Index m = 1; m * m <= p; ++m) {
    if (p % m == 0) m1 = m;
  }
  return SlicingPlan{p, {m1, p / m1}, {}};
}

std::vector<Array> slice_dataset(const Matrix& data, const SlicingPlan& plan) {
  validate_plan(plan);
  if (data.cols() != plan.p) {
    throw DimensionError("slice_dataset: data has " + std::to_string(data.cols()) +
                         " columns, plan expects " + std::to_string(plan.p));
  }
  std::vector<Array> out;
  out.reserve(static_cast<size_t>(data.rows()));
  for (Index r = 0; r < data.rows(); ++r) {
    Vector v(plan.p);
    if (plan.permutation.empty()) {
      v = data.row(r).transpose();
    } else {
      for (Index k = 0; k < plan.p; ++k) {
        v(k) = data(r, plan.permutation[static_cast<size_t>(k)]);
      }
    }
    out.push_back(from_rvec(v, plan.dims));
  }
  return out;
}

Matrix unslice(std::span<const Array> arrays, const SlicingPlan& plan) {
  validate_plan(plan);
  Matrix out(static_cast<Index>(arrays.size()), plan.p);
  for (size_t r = 0; r < arrays.size(); ++r) {
    if (arrays[r].dims() != plan.dims) {
      throw DimensionError("unslice: array dims do not match plan");
    }
    const Vector v = rvec(arrays[r]);
    if (plan.permutation.empty()) {
      out.row(static_cast<Index>(r)) = v.transpose();
    } else {
      for (Index k = 0; k < plan.p; ++k) {
        out(static_cast<Index>(r), plan.permutation[static_cast<size_t>(k)]) = v(k);
      }
    }
  }
  return out;
}

CovarianceEstimate estimate_sliced_covariance(const Matrix& data, const SlicingPlan& plan,
                                              const FlipFlopConfig& config) {
  std::vector<Array> sliced = slice_dataset(data, plan);
  auto [model, report] = flip_flop(sliced, config);
  return CovarianceEstimate{std::move(model), plan, std::move(report)};
}

namespace {

// Conjugation by the plan permutation: entry (a, b) of the original-order
// matrix is entry (k, l) of the sliced-order matrix with a = perm[k].
Matrix unpermute(const Matrix& sliced_order, const SlicingPlan& plan) {
  if (plan.permutation.empty()) return sliced_order;
  const Index p = plan.p;
  Matrix out(p, p);
  for (Index k = 0; k < p; ++k) {
    for (Index l = 0; l < p; ++l) {
      out(plan.permutation[static_cast<size_t>(k)],
          plan.permutation[static_cast<size_t>(l)]) = sliced_order(k, l);
    }
  }
  return out;
}

}  // namespace

Matrix sliced_covariance(const CovarianceEstimate& est, Index cap) {
  return unpermute(full_covariance(est.model, cap), est.plan);
}

Matrix sliced_precision(const CovarianceEstimate& est, Index cap) {
  return unpermute(precision(est.model, cap), est.plan);
}

Vector apply_precision(const CovarianceEstimate& est, const Vector& v) {
  validate_plan(est.plan);
  if (v.size() != est.plan.p) {
    throw DimensionError("apply_precision: vector length does not match plan");
  }
  Vector u(v.size());
  if (est.plan.permutation.empty()) {
    u = v;
  } else {
    for (Index k = 0; k < est.plan.p; ++k) {
      u(k) = v(est.plan.permutation[static_cast<size_t>(k)]);
    }
  }

  const std::vector<Matrix> inverses = component_inverses(est.model);
  std::vector<Matrix> inverses_t;
  inverses_t.reserve(inverses.size());
  for (const Matrix& inv : inverses) inverses_t.push_back(inv.transpose());

  const Array x = from_rvec(u, est.plan.dims);
  const Array y = rmatmul(inverses, x);
  const Array z = rmatmul(inverses_t, y);
  const Vector w = rvec(z);

  Vector out(v.size());
  if (est.plan.permutation.empty()) {
    out = w;
  } else {
    for (Index k = 0; k < est.plan.p; ++k) {
      out(est.plan.permutation[static_cast<size_t>(k)]) = w(k);
    }
  }
  return out;
}

SlicedEigen::SlicedEigen(KronEigen factored, std::vector<std::vector<Index>> indices,
                         std::vector<Index> permutation)
    : factored_(std::move(factored)),
      indices_(std::move(indices)),
      permutation_(std::move(permutation)) {}

double SlicedEigen::value(Index r) const {
  if (r < 0 || r >= count()) throw DimensionError("SlicedEigen: rank out of range");
  return factored_.value_at(indices_[static_cast<size_t>(r)]);
}

Vector SlicedEigen::vector(Index r) const {
  if (r < 0 || r >= count()) throw DimensionError("SlicedEigen: rank out of range");
  const Vector v = factored_.vector_at(indices_[static_cast<size_t>(r)]);
  if (permutation_.empty()) return v;
  Vector out(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    out(permutation_[static_cast<size_t>(k)]) = v(k);
  }
  return out;
}

SlicedEigen sliced_eigen(const CovarianceEstimate& est, Index top_k) {
  validate_plan(est.plan);
  if (top_k < 0 || top_k > est.plan.p) {
    throw DimensionError("sliced_eigen: top_k must be in [0, p]");
  }
  KronEigen factored = kron_eigen(est.model);
  std::vector<std::vector<Index>> indices = factored.top_indices(top_k);
  return SlicedEigen(std::move(factored), std::move(indices), est.plan.permutation);
}

}  // namespace slicecov
