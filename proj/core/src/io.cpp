#include "penprec/io.hpp"

#include <cmath>
#include <charconv>
#include <optional>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

#include "penprec/errors.hpp"

namespace penprec {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line, bool comma) {
  std::vector<std::string_view> out;
  if (comma) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd read_table(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::optional<bool> comma;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!comma) comma = body.find(',') != std::string_view::npos;
    const auto fields = split(body, *comma);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!parse_number(fields[k], values[k])) {
        numeric = false;
        if (!first) {
          throw ParseError("line " + std::to_string(line_no) + ", column " +
                               std::to_string(k + 1) + ": '" + std::string(fields[k]) +
                               "' is not a number",
                           line_no);
        }
        break;
      }
    }
    const bool header = first && !numeric;
    first = false;
    if (header) continue;
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(values.size()),
                       line_no);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no numeric rows found", line_no);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

DataMatrix ingest(std::istream& in, bool center) {
  Eigen::MatrixXd x = read_table(in);
  if (x.rows() < 3) {
    throw TooFewRows("need at least 3 observations, found " + std::to_string(x.rows()));
  }
  if (center) x.rowwise() -= x.colwise().mean();
  return DataMatrix(std::move(x));
}

DataMatrix ingest(const std::filesystem::path& path, bool center) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return ingest(in, center);
}

SymMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  Eigen::MatrixXd m = read_table(in);
  if (m.rows() != m.cols()) {
    throw ParseError(path.string() + ": matrix is not square", 0);
  }
  try {
    return SymMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_matrix(std::ostream& out, const SymMatrix& m) {
  const std::size_t p = m.dim();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_edges(std::ostream& out, const PrecisionEstimate& est) {
  for (const auto& [i, j] : est.support()) {
    if (i == j) continue;
    out << i + 1 << ' ' << j + 1 << ' ' << format_double(est.omega()(i, j)) << '\n';
  }
}

void write_dot(std::ostream& out, const SymMatrix& omega) {
  const std::size_t p = omega.dim();
  out << "graph precision {\n";
  for (std::size_t i = 0; i < p; ++i) out << "  " << i + 1 << ";\n";
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (omega(i, j) == 0.0) continue;
      out << "  " << i + 1 << " -- " << j + 1 << " [weight=" << format_double(omega(i, j))
          << "];\n";
    }
  }
  out << "}\n";
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value", line_no);
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key", line_no);
    if (!kv.emplace(key, value).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                       line_no);
    }
  }
  return kv;
}

}  // namespace penprec
