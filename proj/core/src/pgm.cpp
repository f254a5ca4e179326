#include "slicecov/pgm.hpp"

#include <cmath>
#include <fstream>

#include "slicecov/errors.hpp"

namespace slicecov {

void emit_heatmap_pgm(const Matrix& m, const std::string& path, PgmScale scale) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError("emit_heatmap_pgm: matrix must be nonempty");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);

  out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";

  // Plain PGM lines must stay at or under 70 characters; 17 pixels of at
  // most 3 digits plus separators fit.
  int on_line = 0;
  auto emit = [&](int gray) {
    if (on_line == 17) {
      out << '\n';
      on_line = 0;
    }
    if (on_line > 0) out << ' ';
    out << gray;
    ++on_line;
  };

  if (scale == PgmScale::kMinMax) {
    const double lo = m.minCoeff();
    const double hi = m.maxCoeff();
    const double range = hi - lo;
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        const int gray =
            range == 0.0
                ? 128
                : static_cast<int>(std::lround((m(r, c) - lo) / range * 255.0));
        emit(gray);
      }
    }
  } else {
    const double peak = m.cwiseAbs().maxCoeff();
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        const int gray =
            peak == 0.0
                ? 0
                : static_cast<int>(std::lround(std::abs(m(r, c)) / peak * 255.0));
        emit(gray);
      }
    }
  }
  out << '\n';
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace slicecov
