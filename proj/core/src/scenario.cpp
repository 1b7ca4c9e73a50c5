#include "penprec/scenario.hpp"

#include <cmath>

#include "penprec/errors.hpp"

namespace penprec {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Tridiagonal:
      return "tridiagonal";
    case ScenarioKind::DenseExp:
      return "dense";
    case ScenarioKind::RandomSparse:
      return "sparse";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  if (name == "tridiagonal" || name == "tridiag") return ScenarioKind::Tridiagonal;
  if (name == "dense" || name == "dense_exp") return ScenarioKind::DenseExp;
  if (name == "sparse" || name == "random_sparse") return ScenarioKind::RandomSparse;
  return std::nullopt;
}

void ScenarioSpec::validate() const {
  if (p < 2) throw ConfigError("scenario dimension p must be >= 2");
  if (!(sparse_zero_prob > 0.0 && sparse_zero_prob < 1.0)) {
    throw ConfigError("sparse_zero_prob must be in (0, 1)");
  }
}

SymMatrix make_tridiagonal(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = 0.5;
    m(i + 1, i) = 0.5;
  }
  return SymMatrix(std::move(m));
}

SymMatrix make_dense_exp(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = std::pow(0.5, static_cast<double>(std::abs(i - j)));
    }
  }
  return SymMatrix(std::move(m));
}

SymMatrix make_random_sparse(std::size_t p, double zero_prob, RandomStream& rng) {
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (rng.coin(zero_prob)) continue;
      const double sign = rng.coin(0.5) ? -1.0 : 1.0;
      const double value = sign * (0.5 + 0.5 * rng.uniform());
      m(i, j) = value;
      m(j, i) = value;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row = m.row(i).cwiseAbs().sum();
    m(i, i) = row > 0.0 ? 2.0 * row : 1.0;
  }
  return SymMatrix(std::move(m));
}

SymMatrix make_truth(const ScenarioSpec& spec, RandomStream& rng) {
  switch (spec.kind) {
    case ScenarioKind::Tridiagonal:
      return make_tridiagonal(spec.p);
    case ScenarioKind::DenseExp:
      return make_dense_exp(spec.p);
    case ScenarioKind::RandomSparse:
      return make_random_sparse(spec.p, spec.sparse_zero_prob, rng);
  }
  throw std::invalid_argument("unknown scenario kind");
}

}  // namespace penprec
