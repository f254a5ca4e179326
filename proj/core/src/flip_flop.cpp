#include "slicecov/flip_flop.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "slicecov/errors.hpp"
#include "slicecov/glasso.hpp"
#include "slicecov/linalg.hpp"
#include "slicecov/multilinear.hpp"

namespace slicecov {

namespace {

void check_samples(std::span<const Array> samples, Index min_count) {
  if (static_cast<Index>(samples.size()) < min_count) {
    throw DimensionError("estimator: need at least " + std::to_string(min_count) +
                         " samples, got " + std::to_string(samples.size()));
  }
  const auto& dims = samples.front().dims();
  for (const Array& x : samples) {
    if (x.dims() != dims) {
      throw DimensionError("estimator: samples have inconsistent dims");
    }
  }
}

double divisor_value(ModeDivisor divisor, Index n, double others) {
  switch (divisor) {
    case ModeDivisor::kMle:
      return static_cast<double>(n) * others;
    case ModeDivisor::kUnbiased:
      if (n < 2) throw DimensionError("mode_covariance: unbiased divisor needs N >= 2");
      return static_cast<double>(n - 1) * others;
  }
  throw DimensionError("mode_covariance: unknown divisor convention");
}

Matrix gram(const Matrix& a) { return a * a.transpose(); }

double relative_change(const Matrix& current, const Matrix& previous) {
  const double base = previous.norm();
  return (current - previous).norm() / std::max(base, 1e-300);
}

}  // namespace

Array sample_mean(std::span<const Array> samples) {
  check_samples(samples, 1);
  StableAccumulator acc(samples.front().size());
  for (const Array& x : samples) acc.add(x.raw());
  return Array(samples.front().dims(),
               acc.sum() / static_cast<double>(samples.size()));
}

Matrix mode_covariance(std::span<const Array> centered_samples, Index mode,
                       ModeDivisor divisor) {
  check_samples(centered_samples, 1);
  const Array& first = centered_samples.front();
  if (mode < 0 || mode >= first.order()) {
    throw DimensionError("mode_covariance: mode out of range");
  }
  const Index m = first.dim(mode);
  const double others = static_cast<double>(first.size() / m);

  StableAccumulator acc(m * m);
  for (const Array& x : centered_samples) {
    const Matrix u = mode_unfold(x, mode);
    const Matrix outer = u * u.transpose();
    acc.add(Eigen::Map<const Vector>(outer.data(), outer.size()));
  }
  const double div =
      divisor_value(divisor, static_cast<Index>(centered_samples.size()), others);
  const Vector flat = acc.sum() / div;
  return Eigen::Map<const Matrix>(flat.data(), m, m);
}

namespace {

std::vector<Matrix> initial_components(const std::vector<Index>& dims,
                                       const FlipFlopConfig& config) {
  if (config.init_components.empty()) {
    std::vector<Matrix> init;
    init.reserve(dims.size());
    for (Index m : dims) init.push_back(Matrix::Identity(m, m));
    return init;
  }
  if (config.init_components.size() != dims.size()) {
    throw DimensionError("flip_flop: init component count does not match array order");
  }
  for (size_t j = 0; j < dims.size(); ++j) {
    const Matrix& a = config.init_components[j];
    if (a.rows() != dims[j] || a.cols() != dims[j]) {
      throw DimensionError("flip_flop: init component " + std::to_string(j + 1) +
                           " has wrong shape");
    }
  }
  return config.init_components;
}

}  // namespace

std::pair<ArrayNormalModel, FitReport> flip_flop(std::span<const Array> samples,
                                                 const FlipFlopConfig& config) {
  check_samples(samples, 2);
  if (config.tol <= 0.0 || config.max_iter < 1) {
    throw DimensionError("flip_flop: tol must be positive and max_iter at least 1");
  }
  const Index n = static_cast<Index>(samples.size());
  const auto& dims = samples.front().dims();
  const Index order = static_cast<Index>(dims.size());
  const Index d = samples.front().size();

  // Nonsingularity needs N * prod_j m_j > m_r^2 for every mode r.
  for (Index r = 0; r < order; ++r) {
    if (n * d <= dims[static_cast<size_t>(r)] * dims[static_cast<size_t>(r)]) {
      throw DimensionError("flip_flop: sample-size condition violated for mode " +
                           std::to_string(r + 1) + " (need N*prod(dims) > m_r^2)");
    }
  }

  const bool sparse = !config.penalties.empty();
  if (sparse) {
    if (static_cast<Index>(config.penalties.size()) != order) {
      throw DimensionError("flip_flop: penalty count does not match array order");
    }
    for (double rho : config.penalties) {
      if (rho < 0.0) throw DimensionError("flip_flop: penalties must be nonnegative");
    }
  }

  const Array mean = sample_mean(samples);
  std::vector<Array> centered;
  centered.reserve(samples.size());
  for (const Array& x : samples) {
    Array z = x;
    z -= mean;
    centered.push_back(std::move(z));
  }

  std::vector<Matrix> components = initial_components(dims, config);
  std::vector<Matrix> grams;
  grams.reserve(static_cast<size_t>(order));
  for (const Matrix& a : components) grams.push_back(gram(a));

  FitReport report;
  std::vector<Array> rescaled(centered.size(), Array(dims));
  std::vector<Matrix> sweep_thetas(sparse ? static_cast<size_t>(order) : 0);

  for (Index sweep = 1; sweep <= config.max_iter; ++sweep) {
    double mode0_scale_sq = 1.0;
    for (Index j = 0; j < order; ++j) {
      std::vector<Matrix> scalers;
      scalers.reserve(static_cast<size_t>(order));
      for (Index k = 0; k < order; ++k) {
        if (k == j) {
          scalers.push_back(Matrix::Identity(dims[static_cast<size_t>(k)],
                                             dims[static_cast<size_t>(k)]));
        } else {
          const std::string ctx = "flip_flop component " + std::to_string(k + 1);
          scalers.push_back(checked_inverse(components[static_cast<size_t>(k)],
                                            ctx.c_str()));
        }
      }
      for (size_t l = 0; l < centered.size(); ++l) {
        rescaled[l] = rmatmul(scalers, centered[l]);
      }
      Matrix s = mode_covariance(rescaled, j, config.divisor);
      if (sparse) {
        GlassoResult penalized =
            glasso(s, config.penalties[static_cast<size_t>(j)], config.glasso_tol,
                   config.glasso_max_iter);
        s = std::move(penalized.w);
        sweep_thetas[static_cast<size_t>(j)] = std::move(penalized.theta);
      }
      Matrix a = spd_sqrt(s);
      if (j >= 1) {
        const Index last = dims[static_cast<size_t>(j)] - 1;
        const double pivot = (a * a.transpose())(last, last);
        if (pivot <= 0.0) {
          throw NumericalError("flip_flop: normalization pivot is not positive");
        }
        const double scale = std::sqrt(pivot);
        a /= scale;
        components[0] *= scale;
        mode0_scale_sq *= pivot;
        if (sparse) sweep_thetas[static_cast<size_t>(j)] *= pivot;
      }
      components[static_cast<size_t>(j)] = std::move(a);
    }
    if (sparse) {
      // Mode 1 absorbed every normalization scale this sweep, so its gram is
      // the glasso covariance times the accumulated factor.
      report.sparse_thetas = sweep_thetas;
      report.sparse_thetas[0] /= mode0_scale_sq;
    }

    double max_change = 0.0;
    for (Index j = 0; j < order; ++j) {
      Matrix g = gram(components[static_cast<size_t>(j)]);
      max_change = std::max(max_change,
                            relative_change(g, grams[static_cast<size_t>(j)]));
      grams[static_cast<size_t>(j)] = std::move(g);
    }
    report.iterations = sweep;
    report.changes.push_back(max_change);
    report.log_likelihood_trace.push_back(
        log_likelihood(ArrayNormalModel{mean, components}, samples));
    if (max_change < config.tol) {
      report.converged = true;
      break;
    }
  }

  report.log_likelihood = report.log_likelihood_trace.back();
  return {ArrayNormalModel{mean, components}, report};
}

std::pair<ArrayNormalModel, FitReport> sparse_flip_flop(std::span<const Array> samples,
                                                        const FlipFlopConfig& config) {
  if (config.penalties.empty()) {
    throw DimensionError("sparse_flip_flop: config.penalties must be set");
  }
  return flip_flop(samples, config);
}

ArrayNormalModel normalize_model(const ArrayNormalModel& model) {
  validate(model);
  ArrayNormalModel out = model;
  double absorbed = 1.0;
  for (size_t j = 1; j < out.components.size(); ++j) {
    Matrix& a = out.components[j];
    const Index last = a.rows() - 1;
    const double pivot = (a * a.transpose())(last, last);
    if (pivot <= 0.0) {
      throw NumericalError("normalize_model: last diagonal of component " +
                           std::to_string(j + 1) + " gram is not positive");
    }
    const double scale = std::sqrt(pivot);
    a /= scale;
    absorbed *= scale;
  }
  out.components[0] *= absorbed;
  return out;
}

}  // namespace slicecov
