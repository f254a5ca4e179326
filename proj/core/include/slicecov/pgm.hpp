#pragma once

#include <string>

#include "slicecov/array.hpp"

namespace slicecov {

enum class PgmScale {
  /// Linear map of [min, max] onto [0, 255]; a constant matrix renders as
  /// mid-gray 128.
  kMinMax,
  /// |value| / max|value| onto [0, 255]; an all-zero matrix renders as black.
  kAbsolute,
};

/// Writes the matrix as a plain (P2) PGM image, one pixel per entry in
/// row-major order, deterministic for identical inputs.
void emit_heatmap_pgm(const Matrix& m, const std::string& path, PgmScale scale);

}  // namespace slicecov
