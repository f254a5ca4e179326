#pragma once

#include <span>
#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/array_normal.hpp"

namespace slicecov {

/// Divisor used for the mode covariance S_j: N * prod_{k != j} m_k (the
/// MLE-style convention) or the same with N replaced by N - 1.
enum class ModeDivisor { kMle, kUnbiased };

struct FlipFlopConfig {
  double tol = 1e-6;
  Index max_iter = 100;
  /// Initial components; empty means identity matrices.
  std::vector<Matrix> init_components;
  /// Per-mode L1 penalties for the sparse variant; empty means plain fits.
  std::vector<double> penalties;
  ModeDivisor divisor = ModeDivisor::kMle;
  double glasso_tol = 1e-8;
  Index glasso_max_iter = 500;
};

struct FitReport {
  Index iterations = 0;
  /// Max over modes of the relative Frobenius change in A_jA_j' per sweep;
  /// length equals iterations.
  std::vector<double> changes;
  bool converged = false;
  /// Fitted-model log-likelihood after each sweep; length equals iterations.
  /// Non-decrease is a diagnostic, not a guarantee.
  std::vector<double> log_likelihood_trace;
  double log_likelihood = 0.0;
  /// Sparse fits only: per-mode penalized precision estimates from the final
  /// sweep, rescaled to invert the returned A_jA_j'. Zero entries are exact.
  std::vector<Matrix> sparse_thetas;
};

/// Mean array of the samples; order-canonical accumulation makes the result
/// invariant to sample order, bitwise.
Array sample_mean(std::span<const Array> samples);

/// S_j = (1/divisor) * sum_l U_l U_l' with U_l the mode-j unfolding of sample
/// l. Accumulation is order-canonical per entry (sample order never matters).
Matrix mode_covariance(std::span<const Array> centered_samples, Index mode,
                       ModeDivisor divisor = ModeDivisor::kMle);

/// Alternating estimation of the array-normal parameters. Centers by the
/// sample mean, then cycles over modes: rescale the centered samples by the
/// current inverse components in every mode except j, take the mode-j
/// covariance (glasso-regularized when config.penalties is present), replace
/// A_j with its symmetric PD square root, and for j >= 2 rescale so the last
/// diagonal of A_jA_j' is 1, absorbing the scale into A_1. Stops when the max
/// relative change of the A_jA_j' drops below config.tol; on hitting max_iter
/// the last iterate is returned with converged = false.
std::pair<ArrayNormalModel, FitReport> flip_flop(std::span<const Array> samples,
                                                 const FlipFlopConfig& config = {});

/// flip_flop with config.penalties required to be present.
std::pair<ArrayNormalModel, FitReport> sparse_flip_flop(std::span<const Array> samples,
                                                        const FlipFlopConfig& config);

/// Rescales components so that for j >= 2 the last diagonal element of
/// A_jA_j' equals 1, absorbing all scale into A_1. The full covariance is
/// unchanged.
ArrayNormalModel normalize_model(const ArrayNormalModel& model);

}  // namespace slicecov
