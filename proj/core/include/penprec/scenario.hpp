#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "penprec/matrix.hpp"
#include "penprec/random.hpp"

namespace penprec {

enum class ScenarioKind { Tridiagonal, DenseExp, RandomSparse };

std::string_view to_string(ScenarioKind kind);
/// Accepts "tridiagonal", "dense" / "dense_exp", "sparse" / "random_sparse".
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Tridiagonal;
  std::size_t p = 20;
  /// Probability that an off-diagonal entry is zero (RandomSparse only).
  double sparse_zero_prob = 0.8;

  void validate() const;
};

/// omega_ii = 1, omega_{i,i+1} = omega_{i+1,i} = 0.5.
SymMatrix make_tridiagonal(std::size_t p);

/// omega_ij = 0.5^|i - j|.
SymMatrix make_dense_exp(std::size_t p);

/// Each off-diagonal pair is zero with probability `zero_prob`, otherwise
/// uniform on [-1, -0.5] U [0.5, 1]. The diagonal is twice the absolute row
/// sum of the off-diagonal entries; a row with no off-diagonal entries gets 1.
SymMatrix make_random_sparse(std::size_t p, double zero_prob, RandomStream& rng);

/// Builds the true precision matrix for a scenario. Only RandomSparse
/// consumes draws from `rng`.
SymMatrix make_truth(const ScenarioSpec& spec, RandomStream& rng);

}  // namespace penprec
