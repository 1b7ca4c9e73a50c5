#pragma once

#include <cstdint>
#include <random>

#include "penprec/matrix.hpp"

namespace penprec {

/// Seeded pseudo-random stream.
///
/// `spawn(i)` derives an independent child stream from the seed alone, so the
/// child does not depend on how many draws were taken from the parent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream spawn(std::uint64_t index) const;

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool coin(double p_true) { return uniform() < p_true; }

  std::mt19937_64& engine() noexcept { return engine_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// n draws from N(0, L L^T): each row is L z with z standard normal.
DataMatrix sample_mvn(const CholeskyFactor& sigma, std::size_t n, RandomStream& rng);

}  // namespace penprec
