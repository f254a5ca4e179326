#pragma once

#include "slicecov/array.hpp"

namespace slicecov {

struct GlassoResult {
  Matrix w;               // regularized covariance, diag(w) = diag(s) + rho
  Matrix theta;           // sparse precision, w * theta = I at convergence
  Index iterations = 0;   // full column sweeps used
  double kkt_residual = 0.0;
};

/// L1-penalized inverse covariance via block coordinate descent: each column
/// is a lasso subproblem solved by cyclic coordinate descent with
/// soft-thresholding. Columns and inner coordinates are visited in ascending
/// index order, so results are deterministic. Convergence is declared when the
/// stationarity residual max over entries of
///   |s_ij - w_ij + rho*sign(theta_ij)|      (theta_ij != 0, i != j)
///   max(0, |s_ij - w_ij| - rho)             (theta_ij == 0, i != j)
///   |w_ii - s_ii - rho|                     (diagonal)
/// falls below tol. Throws NumericalError on asymmetric input, nonpositive
/// diagonal, a non-positive-definite iterate, or non-convergence.
GlassoResult glasso(const Matrix& s, double rho, double tol = 1e-8,
                    Index max_iter = 500);

}  // namespace slicecov
