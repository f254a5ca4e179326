#include "slicecov/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "slicecov/errors.hpp"

namespace slicecov {

namespace {

// Splits one CSV line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, Index row) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw DataError("csv: unterminated quote in row " + std::to_string(row));
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, Index row, Index col) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) {
    throw DataError("csv: non-numeric cell '" + cell + "' at row " +
                    std::to_string(row) + ", column " + std::to_string(col));
  }
  return value;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError("csv: " + path + " is empty");

  Dataset out;
  size_t first_data = 0;
  Index label_index = -1;
  std::vector<std::string> header;

  if (options.has_header) {
    header = split_csv_line(lines[0], 1);
    first_data = 1;
    if (!options.label_column.empty()) {
      for (size_t j = 0; j < header.size(); ++j) {
        if (trim(header[j]) == options.label_column) {
          label_index = static_cast<Index>(j);
          break;
        }
      }
      if (label_index < 0) {
        throw DataError("csv: label column '" + options.label_column +
                        "' not found in header");
      }
    }
    for (size_t j = 0; j < header.size(); ++j) {
      if (static_cast<Index>(j) != label_index) {
        out.variable_names.push_back(trim(header[j]));
      }
    }
  } else if (!options.label_column.empty()) {
    throw DataError("csv: a label column requires a header");
  }

  if (first_data >= lines.size()) {
    throw DataError("csv: " + path + " has no data rows");
  }

  const Index expected =
      options.has_header
          ? static_cast<Index>(header.size())
          : static_cast<Index>(split_csv_line(lines[first_data], 1).size());
  const Index p = label_index >= 0 ? expected - 1 : expected;
  if (p < 1) throw DataError("csv: no numeric columns in " + path);

  const Index n = static_cast<Index>(lines.size() - first_data);
  out.values.resize(n, p);
  for (Index r = 0; r < n; ++r) {
    const Index row_number = static_cast<Index>(first_data) + r + 1;
    const auto fields = split_csv_line(lines[first_data + static_cast<size_t>(r)],
                                       row_number);
    if (static_cast<Index>(fields.size()) != expected) {
      throw DataError("csv: row " + std::to_string(row_number) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(expected));
    }
    Index c = 0;
    for (size_t j = 0; j < fields.size(); ++j) {
      if (static_cast<Index>(j) == label_index) {
        out.labels.push_back(trim(fields[j]));
      } else {
        out.values(r, c) = parse_cell(fields[j], row_number,
                                      static_cast<Index>(j) + 1);
        ++c;
      }
    }
  }
  return out;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

}  // namespace

void save_matrix_csv(const Matrix& m, const std::string& path,
                     std::span<const std::string> header) {
  if (!header.empty() && static_cast<Index>(header.size()) != m.cols()) {
    throw DimensionError("save_matrix_csv: header size does not match columns");
  }
  std::ofstream out = open_for_write(path);
  if (!header.empty()) {
    for (size_t j = 0; j < header.size(); ++j) {
      if (j > 0) out << ',';
      out << header[j];
    }
    out << '\n';
  }
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

Matrix load_matrix_csv(const std::string& path) {
  return load_csv(path).values;
}

void save_eigencurve_csv(std::span<const EigencurvePoint> points,
                         const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "replication,N,eigen_index,estimate,truth\n";
  for (const EigencurvePoint& pt : points) {
    out << pt.replication << ',' << pt.n << ',' << pt.eigen_index << ','
        << format_double(pt.estimate) << ',' << format_double(pt.truth) << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace slicecov
