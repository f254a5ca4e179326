#include "slicecov/glasso.hpp"

#include <cmath>
#include <string>

#include "slicecov/errors.hpp"
#include "slicecov/linalg.hpp"

namespace slicecov {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Residual of the stationarity conditions S - W + rho*sign(Theta) = 0 with the
// usual subgradient relaxation on zero entries.
double kkt_residual(const Matrix& s, const Matrix& w, const Matrix& theta, double rho) {
  double worst = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      double r = 0.0;
      if (i == j) {
        r = std::abs(w(i, i) - s(i, i) - rho);
      } else if (theta(i, j) != 0.0) {
        const double sign = theta(i, j) > 0.0 ? 1.0 : -1.0;
        r = std::abs(s(i, j) - w(i, j) + rho * sign);
      } else {
        r = std::max(0.0, std::abs(s(i, j) - w(i, j)) - rho);
      }
      worst = std::max(worst, r);
    }
  }
  return worst;
}

// Recovers the precision matrix from W and the per-column lasso coefficients.
Matrix recover_theta(const Matrix& w, const Matrix& betas) {
  const Index p = w.rows();
  Matrix theta = Matrix::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    double cross = 0.0;
    for (Index k = 0; k < p; ++k) {
      if (k != j) cross += w(k, j) * betas(k, j);
    }
    const double denom = w(j, j) - cross;
    if (denom <= 0.0) {
      throw NumericalError("glasso: iterate lost positive definiteness");
    }
    const double tjj = 1.0 / denom;
    theta(j, j) = tjj;
    for (Index k = 0; k < p; ++k) {
      if (k != j) theta(k, j) = -betas(k, j) * tjj;
    }
  }
  return symmetrize(theta);
}

}  // namespace

GlassoResult glasso(const Matrix& s, double rho, double tol, Index max_iter) {
  const Index p = s.rows();
  if (p < 1 || s.cols() != p) {
    throw DimensionError("glasso: input must be square and nonempty");
  }
  if (asymmetry(s) > 1e-10) {
    throw NumericalError("glasso: input is not symmetric");
  }
  if (rho < 0.0) throw DimensionError("glasso: penalty must be nonnegative");
  if (tol <= 0.0 || max_iter < 1) {
    throw DimensionError("glasso: tol must be positive and max_iter at least 1");
  }
  for (Index i = 0; i < p; ++i) {
    if (s(i, i) <= 0.0) {
      throw NumericalError("glasso: diagonal entry " + std::to_string(i + 1) +
                           " is not positive");
    }
  }

  Matrix w = symmetrize(s);
  w.diagonal().array() += rho;

  if (p == 1) {
    GlassoResult out;
    out.w = w;
    out.theta = Matrix::Constant(1, 1, 1.0 / w(0, 0));
    return out;
  }

  Matrix betas = Matrix::Zero(p, p);
  const double inner_tol = tol * 1e-3;
  const Index inner_cap = 1000;

  GlassoResult out;
  for (Index sweep = 1; sweep <= max_iter; ++sweep) {
    for (Index j = 0; j < p; ++j) {
      // Lasso for column j: coordinates are the off-j rows, warm-started.
      for (Index inner = 0; inner < inner_cap; ++inner) {
        double max_delta = 0.0;
        for (Index k = 0; k < p; ++k) {
          if (k == j) continue;
          double gradient = s(k, j);
          for (Index l = 0; l < p; ++l) {
            if (l != j && l != k) gradient -= w(k, l) * betas(l, j);
          }
          const double updated = soft_threshold(gradient, rho) / w(k, k);
          max_delta = std::max(max_delta, std::abs(updated - betas(k, j)));
          betas(k, j) = updated;
        }
        if (max_delta <= inner_tol) break;
      }
      for (Index k = 0; k < p; ++k) {
        if (k == j) continue;
        double value = 0.0;
        for (Index l = 0; l < p; ++l) {
          if (l != j) value += w(k, l) * betas(l, j);
        }
        w(k, j) = value;
        w(j, k) = value;
      }
    }
    out.iterations = sweep;
    out.theta = recover_theta(w, betas);
    // Stationarity must hold at the covariance implied by the current
    // precision. The working W satisfies it column-by-column as soon as each
    // column is refreshed, so testing W itself would stop after one sweep
    // with Theta still built from stale coefficients.
    out.kkt_residual = kkt_residual(s, out.theta.inverse(), out.theta, rho);
    if (std::isfinite(out.kkt_residual) && out.kkt_residual < tol) {
      out.w = w;
      return out;
    }
  }
  throw NumericalError("glasso: no convergence within " + std::to_string(max_iter) +
                       " sweeps (residual " + std::to_string(out.kkt_residual) + ")");
}

}  // namespace slicecov
