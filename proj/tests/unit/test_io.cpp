#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "penprec/errors.hpp"
#include "penprec/io.hpp"
#include "penprec/scenario.hpp"

using namespace penprec;

namespace {

DataMatrix ingest_text(const std::string& text, bool center = false) {
  std::istringstream in(text);
  return ingest(in, center);
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_table(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("penprec_io_" + name);
}

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("ingest detects delimiters and headers") {
  Eigen::MatrixXd expected(3, 2);
  expected << 1, 2, 3, 4, 5, 6;
  const auto comma = ingest_text("1,2\n3,4\n5,6\n");
  CHECK(comma.rows() == 3);
  CHECK(comma.cols() == 2);
  CHECK(comma.values() == expected);
  CHECK(ingest_text("1 2\n3\t4\n  5   6\n").values() == expected);
  CHECK(ingest_text("a,b\n1,2\n3,4\n5,6").values() == expected);
  CHECK(ingest_text("# comment\n\n1,2\n3,4\n\n5,6\n").values() == expected);
  CHECK(ingest_text("1,2\r\n3,4\r\n5,6\r\n").values() == expected);
  CHECK(ingest_text("1e0,-2.5E-1\n3,4\n5,6").values()(0, 1) == -0.25);
}

TEST_CASE("ingest errors") {
  CHECK_THROWS_AS(ingest_text("1,2\n3,4\n"), TooFewRows);
  CHECK_THROWS_AS(ingest_text(""), InputError);
  CHECK(parse_error_line("1,2\n3,4\n5\n") == 3);
  CHECK(parse_error_line("x,y\n1,2\n3,oops\n") == 3);
  CHECK(parse_error_line("1,2\n\n3,4,5\n") == 3);
  CHECK(parse_error_line("1,2\nnan,4\n") == 2);
  CHECK_THROWS_AS(ingest(scratch("does_not_exist.csv")), InputError);
}

TEST_CASE("ingest centering") {
  const auto d = ingest_text("1,10\n2,20\n3,60\n", true);
  CHECK(d.values().colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(d.values()(0, 0) == -1.0);
  CHECK(d.values()(2, 1) == 30.0);
}

TEST_CASE("matrix round trip") {
  const SymMatrix m = SymMatrix::symmetrized(oracle::random_spd(6, 3) / 7.0);
  const auto path = scratch("roundtrip.csv");
  {
    std::ofstream out(path);
    write_matrix(out, m);
  }
  const SymMatrix back = read_matrix(path);
  CHECK((back.matrix() - m.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(back == m);
  std::filesystem::remove(path);
}

TEST_CASE("read_matrix rejects non-square or asymmetric input") {
  const auto path = scratch("bad.csv");
  {
    std::ofstream out(path);
    out << "1,2\n3,4\n";
  }
  CHECK_THROWS_AS(read_matrix(path), InputError);
  {
    std::ofstream out(path);
    out << "1,0,0\n0,1,0\n";
  }
  CHECK_THROWS_AS(read_matrix(path), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("edges") {
  std::ostringstream none;
  write_edges(none, PrecisionEstimate::from_omega(SymMatrix::identity(4)));
  CHECK(none.str().empty());
  std::ostringstream path;
  write_edges(path, PrecisionEstimate::from_omega(make_tridiagonal(4)));
  CHECK(path.str() == "1 2 0.5\n2 3 0.5\n3 4 0.5\n");
}

TEST_CASE("dot graphs") {
  std::ostringstream diag;
  write_dot(diag, SymMatrix::identity(3));
  CHECK(diag.str().find("graph") != std::string::npos);
  CHECK(count_lines_with(diag.str(), " -- ") == 0);
  for (const char* node : {"1", "2", "3"})
    CHECK(diag.str().find(std::string("  ") + node + ";") != std::string::npos);

  std::ostringstream tri;
  write_dot(tri, make_tridiagonal(4));
  CHECK(count_lines_with(tri.str(), " -- ") == 3);
  CHECK(tri.str().find("1 -- 2") != std::string::npos);
  CHECK(tri.str().find("2 -- 3") != std::string::npos);
  CHECK(tri.str().find("3 -- 4") != std::string::npos);
  CHECK(tri.str().find("1 -- 3") == std::string::npos);

  std::ostringstream dense;
  write_dot(dense, make_dense_exp(5));
  CHECK(count_lines_with(dense.str(), " -- ") == 10);
}

TEST_CASE("key value files") {
  std::istringstream good("# settings\npenalty = scad\n\n  reps=10  # trailing\nn = 50,100\n");
  const auto kv = read_key_values(good);
  CHECK(kv.size() == 3);
  CHECK(kv.at("penalty") == "scad");
  CHECK(kv.at("reps") == "10");
  CHECK(kv.at("n") == "50,100");

  std::istringstream missing("penalty scad\n");
  CHECK_THROWS_AS(read_key_values(missing), ParseError);
  std::istringstream repeated("a = 1\nb = 2\na = 3\n");
  try {
    read_key_values(repeated);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
