#include "slicecov/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "slicecov/errors.hpp"

namespace slicecov {

double asymmetry(const Matrix& s) {
  if (s.rows() != s.cols()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  return (s - s.transpose()).cwiseAbs().maxCoeff() / scale;
}

Matrix symmetrize(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

Matrix spd_sqrt(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("spd_sqrt: matrix must be square, got " +
                         std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
  if (asymmetry(s) > 1e-10) {
    throw NumericalError("spd_sqrt: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(s));
  if (eig.info() != Eigen::Success) {
    throw NumericalError("spd_sqrt: eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lmax = lambda(lambda.size() - 1);
  const double floor = 1e-12 * std::max(lmax, 0.0);
  if (lambda(0) <= floor) {
    throw NumericalError("spd_sqrt: matrix is not positive definite (min eigenvalue " +
                         std::to_string(lambda(0)) + ")");
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

double log_abs_det(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("log_abs_det: matrix must be square");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  double log_det = 0.0;
  const auto& u = lu.matrixLU();
  for (Index i = 0; i < u.rows(); ++i) {
    const double piv = std::abs(u(i, i));
    if (piv == 0.0 || !std::isfinite(piv)) {
      throw NumericalError("log_abs_det: matrix is singular");
    }
    log_det += std::log(piv);
  }
  return log_det;
}

Matrix checked_inverse(const Matrix& a, const char* context) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(context) + ": matrix must be square");
  }
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) {
    throw NumericalError(std::string(context) + ": matrix is singular");
  }
  return lu.inverse();
}

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end(), [](double a, double b) {
    const double aa = std::abs(a);
    const double ab = std::abs(b);
    if (aa != ab) return aa < ab;
    return a < b;
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

StableAccumulator::StableAccumulator(Index n) : cells_(static_cast<size_t>(n)) {
  if (n < 0) throw DimensionError("StableAccumulator: negative size");
}

void StableAccumulator::add(const Vector& contribution) {
  if (static_cast<size_t>(contribution.size()) != cells_.size()) {
    throw DimensionError("StableAccumulator: contribution size mismatch");
  }
  for (size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].push_back(contribution(static_cast<Index>(i)));
  }
  ++count_;
}

Vector StableAccumulator::sum() const {
  Vector out(static_cast<Index>(cells_.size()));
  for (size_t i = 0; i < cells_.size(); ++i) {
    out(static_cast<Index>(i)) = stable_sum(cells_[i]);
  }
  return out;
}

}  // namespace slicecov
