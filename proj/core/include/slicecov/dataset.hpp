#pragma once

#include <span>
#include <string>
#include <vector>

#include "slicecov/array.hpp"

namespace slicecov {

/// Observation matrix with optional per-row labels and per-column names.
struct Dataset {
  Matrix values;
  std::vector<std::string> labels;          // empty when absent; else one per row
  std::vector<std::string> variable_names;  // empty when absent; else one per column
};

struct CsvOptions {
  bool has_header = false;
  /// Header name of a non-numeric label column to extract; requires a header.
  std::string label_column;
};

/// Reads a comma-separated file: rows are observations, columns variables.
/// Quoted fields with doubled quotes are honored; decimals are parsed
/// locale-independently (dot only). Errors carry 1-based row/column
/// positions.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Shortest text that round-trips the double exactly (%.17g).
std::string format_double(double value);

/// Writes a matrix as CSV at full precision, one row per line; an optional
/// header row is emitted when names are given.
void save_matrix_csv(const Matrix& m, const std::string& path,
                     std::span<const std::string> header = {});

/// Reads back a matrix written by save_matrix_csv (no header, no labels).
Matrix load_matrix_csv(const std::string& path);

/// One point of an eigenvalue-vs-sample-size sweep.
struct EigencurvePoint {
  Index replication = 0;
  Index n = 0;
  Index eigen_index = 0;
  double estimate = 0.0;
  double truth = 0.0;
};

/// Writes sweep points with the header replication,N,eigen_index,estimate,truth.
void save_eigencurve_csv(std::span<const EigencurvePoint> points,
                         const std::string& path);

}  // namespace slicecov
