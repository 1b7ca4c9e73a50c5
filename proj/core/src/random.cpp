#include "penprec/random.hpp"

namespace penprec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seeded_engine(seed)) {}

RandomStream RandomStream::spawn(std::uint64_t index) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

DataMatrix sample_mvn(const CholeskyFactor& sigma, std::size_t n, RandomStream& rng) {
  const auto p = static_cast<Eigen::Index>(sigma.dim());
  const Eigen::MatrixXd& l = sigma.lower();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(p);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index k = 0; k < p; ++k) z(k) = rng.normal();
    x.row(r) = (l.triangularView<Eigen::Lower>() * z).transpose();
  }
  return DataMatrix(std::move(x));
}

}  // namespace penprec
