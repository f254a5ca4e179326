#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "slicecov/dataset.hpp"
#include "slicecov/errors.hpp"
#include "slicecov/pgm.hpp"
#include "slicecov/rng.hpp"
#include "test_helpers.hpp"

using namespace slicecov;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("slicecov_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Pgm {
  Index width = 0;
  Index height = 0;
  Index maxval = 0;
  std::vector<Index> pixels;
};

// Minimal plain-PGM reader used to check emitted images against the grammar.
Pgm parse_pgm(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  in >> magic;
  REQUIRE(magic == "P2");
  Pgm out;
  in >> out.width >> out.height >> out.maxval;
  Index value = 0;
  while (in >> value) out.pixels.push_back(value);
  REQUIRE(static_cast<Index>(out.pixels.size()) == out.width * out.height);
  return out;
}

bool mentions(const DataError& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("load_csv parses a plain numeric table") {
  const auto path = temp_file("plain.csv");
  write_file(path, "1,2,3\n4,5,6\n");
  const Dataset d = load_csv(path.string());
  REQUIRE(d.values.rows() == 2);
  REQUIRE(d.values.cols() == 3);
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(0, 2) == 3.0);
  CHECK(d.values(1, 1) == 5.0);
  CHECK(d.labels.empty());
  CHECK(d.variable_names.empty());
}

TEST_CASE("load_csv header and label column") {
  const auto path = temp_file("labeled.csv");
  write_file(path, "a,tissue,b\n1,tumor,2\n3,normal,4\n");
  CsvOptions options;
  options.has_header = true;
  options.label_column = "tissue";
  const Dataset d = load_csv(path.string(), options);
  REQUIRE(d.values.rows() == 2);
  REQUIRE(d.values.cols() == 2);
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(0, 1) == 2.0);
  CHECK(d.values(1, 0) == 3.0);
  CHECK(d.values(1, 1) == 4.0);
  REQUIRE(d.labels.size() == 2);
  CHECK(d.labels[0] == "tumor");
  CHECK(d.labels[1] == "normal");
  REQUIRE(d.variable_names.size() == 2);
  CHECK(d.variable_names[0] == "a");
  CHECK(d.variable_names[1] == "b");
}

TEST_CASE("load_csv quoting, whitespace, and line endings") {
  const auto path = temp_file("quoted.csv");
  write_file(path,
             "name,x\r\n"
             "\"he said \"\"hi\"\"\", 2.5\r\n"
             "plain,\"3\"\r\n"
             "\n"
             "\n");
  CsvOptions options;
  options.has_header = true;
  options.label_column = "name";
  const Dataset d = load_csv(path.string(), options);
  REQUIRE(d.values.rows() == 2);  // trailing blank lines are dropped
  CHECK(d.labels[0] == "he said \"hi\"");
  CHECK(d.labels[1] == "plain");
  CHECK(d.values(0, 0) == 2.5);
  CHECK(d.values(1, 0) == 3.0);
}

TEST_CASE("load_csv error reporting") {
  SUBCASE("ragged row names the offending row") {
    const auto path = temp_file("ragged.csv");
    write_file(path, "1,2\n3,4\n5\n");
    try {
      load_csv(path.string());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(mentions(e, "row 3"));
    }
  }

  SUBCASE("non-numeric cell names row and column") {
    const auto path = temp_file("nonnum.csv");
    write_file(path, "1,2\n3,oops\n");
    try {
      load_csv(path.string());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(mentions(e, "row 2"));
      CHECK(mentions(e, "column 2"));
      CHECK(mentions(e, "oops"));
    }
  }

  SUBCASE("label column without header") {
    const auto path = temp_file("nohdr.csv");
    write_file(path, "1,2\n");
    CsvOptions options;
    options.label_column = "y";
    CHECK_THROWS_AS(load_csv(path.string(), options), DataError);
  }

  SUBCASE("label column missing from the header") {
    const auto path = temp_file("missing.csv");
    write_file(path, "a,b\n1,2\n");
    CsvOptions options;
    options.has_header = true;
    options.label_column = "tissue";
    CHECK_THROWS_AS(load_csv(path.string(), options), DataError);
  }

  SUBCASE("unreadable path") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv"), DataError);
  }

  SUBCASE("header only, no data rows") {
    const auto path = temp_file("hdronly.csv");
    write_file(path, "a,b\n");
    CsvOptions options;
    options.has_header = true;
    CHECK_THROWS_AS(load_csv(path.string(), options), DataError);
  }

  SUBCASE("unterminated quote") {
    const auto path = temp_file("unterm.csv");
    write_file(path, "\"1,2\n");
    CHECK_THROWS_AS(load_csv(path.string()), DataError);
  }
}

TEST_CASE("format_double round trips exactly") {
  Rng rng(101);
  std::vector<double> values{0.0,     -0.0,   1.0 / 3.0, 0.1,  1e300,
                             -2.5e-7, 123456, 1e-300,    42.0};
  for (int i = 0; i < 50; ++i) {
    values.push_back(rng.normal() * std::pow(10.0, (i % 13) - 6));
  }
  for (double v : values) {
    const std::string text = format_double(v);
    double back = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), back);
    REQUIRE(ec == std::errc{});
    CHECK(back == v);
  }
}

TEST_CASE("matrix CSV round trip is bitwise") {
  Rng rng(102);
  Matrix m(7, 5);
  for (Index r = 0; r < 7; ++r) {
    for (Index c = 0; c < 5; ++c) {
      m(r, c) = rng.normal() * std::pow(10.0, (r * 5 + c) % 11 - 5);
    }
  }
  m(0, 0) = 0.0;
  m(1, 1) = -1e307;
  const auto path = temp_file("roundtrip.csv");
  save_matrix_csv(m, path.string());
  const Matrix back = load_matrix_csv(path.string());
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 5);
  for (Index r = 0; r < 7; ++r) {
    for (Index c = 0; c < 5; ++c) CHECK(back(r, c) == m(r, c));
  }

  SUBCASE("identity stays exact") {
    const auto ipath = temp_file("identity.csv");
    save_matrix_csv(Matrix::Identity(3, 3), ipath.string());
    const Matrix id = load_matrix_csv(ipath.string());
    CHECK((id - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("optional header row") {
    const auto hpath = temp_file("withheader.csv");
    const std::vector<std::string> names{"u", "v"};
    save_matrix_csv(Matrix::Zero(1, 2), hpath.string(), names);
    const std::string text = read_file(hpath);
    CHECK(text.substr(0, 4) == "u,v\n");
    const std::vector<std::string> bad{"only"};
    CHECK_THROWS_AS(save_matrix_csv(Matrix::Zero(1, 2), hpath.string(), bad),
                    DimensionError);
  }
}

TEST_CASE("eigencurve CSV schema") {
  std::vector<EigencurvePoint> points;
  points.push_back(EigencurvePoint{1, 5, 0, 1.5, 2.0});
  points.push_back(EigencurvePoint{2, 50, 3, 0.25, 0.5});
  const auto path = temp_file("curve.csv");
  save_eigencurve_csv(points, path.string());
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "replication,N,eigen_index,estimate,truth");
  REQUIRE(std::getline(in, line));
  CHECK(line == "1,5,0,1.5,2");
  REQUIRE(std::getline(in, line));
  CHECK(line == "2,50,3,0.25,0.5");
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("heatmap PGM output") {
  SUBCASE("identity with min-max scaling") {
    const auto path = temp_file("id.pgm");
    emit_heatmap_pgm(Matrix::Identity(2, 2), path.string(), PgmScale::kMinMax);
    const Pgm img = parse_pgm(read_file(path));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.maxval == 255);
    REQUIRE(img.pixels.size() == 4);
    CHECK(img.pixels[0] == 255);
    CHECK(img.pixels[1] == 0);
    CHECK(img.pixels[2] == 0);
    CHECK(img.pixels[3] == 255);
  }

  SUBCASE("constant matrix renders mid-gray") {
    const auto path = temp_file("const.pgm");
    emit_heatmap_pgm(Matrix::Constant(3, 3, 7.0), path.string(), PgmScale::kMinMax);
    const Pgm img = parse_pgm(read_file(path));
    for (Index v : img.pixels) CHECK(v == 128);
  }

  SUBCASE("absolute scaling of a signed matrix") {
    Matrix m(1, 3);
    m << -2.0, 1.0, 0.0;
    const auto path = temp_file("abs.pgm");
    emit_heatmap_pgm(m, path.string(), PgmScale::kAbsolute);
    const Pgm img = parse_pgm(read_file(path));
    CHECK(img.width == 3);
    CHECK(img.height == 1);
    CHECK(img.pixels[0] == 255);
    CHECK(img.pixels[1] == 128);  // 0.5 rounds up
    CHECK(img.pixels[2] == 0);
  }

  SUBCASE("all-zero matrix under absolute scaling is black") {
    const auto path = temp_file("zero.pgm");
    emit_heatmap_pgm(Matrix::Zero(2, 2), path.string(), PgmScale::kAbsolute);
    const Pgm img = parse_pgm(read_file(path));
    for (Index v : img.pixels) CHECK(v == 0);
  }

  SUBCASE("wide matrices wrap sample lines under 70 characters") {
    const auto path = temp_file("wide.pgm");
    emit_heatmap_pgm(Matrix::Identity(20, 20), path.string(), PgmScale::kMinMax);
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) CHECK(line.size() <= 70);
    const Pgm img = parse_pgm(text);
    CHECK(img.width == 20);
    CHECK(img.height == 20);
  }

  SUBCASE("byte-identical across repeated emission") {
    Rng rng(103);
    Matrix m(5, 4);
    for (Index r = 0; r < 5; ++r) {
      for (Index c = 0; c < 4; ++c) m(r, c) = rng.normal();
    }
    const auto p1 = temp_file("rep1.pgm");
    const auto p2 = temp_file("rep2.pgm");
    emit_heatmap_pgm(m, p1.string(), PgmScale::kMinMax);
    emit_heatmap_pgm(m, p2.string(), PgmScale::kMinMax);
    CHECK(read_file(p1) == read_file(p2));
  }
}

}  // TEST_SUITE
