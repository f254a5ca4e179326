#pragma once

#include <stdexcept>
#include <string>

namespace slicecov {

/// Shape or argument mismatch: incompatible dimensions, bad mode index,
/// malformed plans or permutations.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: singular or indefinite matrices, degenerate data,
/// infeasible sample sizes, solver breakdown.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Input file problems: missing files, CSV parse errors, ragged rows.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slicecov
