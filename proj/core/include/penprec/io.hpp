#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "penprec/estimate.hpp"
#include "penprec/matrix.hpp"

namespace penprec {

/// Reads a rectangular numeric table. Fields are separated by commas when the
/// first data line contains one, otherwise by whitespace. A first line with a
/// non-numeric field is treated as a header and skipped; blank lines and lines
/// starting with '#' are ignored. Throws ParseError with the 1-based line.
Eigen::MatrixXd read_table(std::istream& in);

/// Observations in rows, variables in columns. When `center` is set the
/// column means are subtracted. Throws TooFewRows when fewer than 3 rows.
DataMatrix ingest(const std::filesystem::path& path, bool center = false);
DataMatrix ingest(std::istream& in, bool center = false);

/// Reads a square symmetric matrix written by write_matrix.
SymMatrix read_matrix(const std::filesystem::path& path);

/// Comma-separated, 17 significant digits.
void write_matrix(std::ostream& out, const SymMatrix& m);

/// "i j omega_ij" per off-diagonal support pair, 1-based, i < j.
void write_edges(std::ostream& out, const PrecisionEstimate& est);

/// Undirected DOT graph: one node per variable, one edge per nonzero
/// off-diagonal pair i < j with weight omega_ij.
void write_dot(std::ostream& out, const SymMatrix& omega);

/// Flat "key = value" file; '#' starts a comment. Throws ParseError on a
/// line without '=' or a repeated key.
std::map<std::string, std::string> read_key_values(std::istream& in);

/// Shortest round-trip representation with 17 significant digits.
std::string format_double(double v);

}  // namespace penprec
