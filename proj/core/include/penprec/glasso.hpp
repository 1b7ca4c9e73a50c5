#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "penprec/estimate.hpp"
#include "penprec/matrix.hpp"

namespace penprec {

/// Symmetric nonnegative per-element L1 weights. An infinite entry pins the
/// corresponding precision element to exactly zero.
class PenaltyWeights {
 public:
  static constexpr double kInfinite = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument unless `w` is square, symmetric, free of
  /// NaN, nonnegative, and finite on the diagonal.
  explicit PenaltyWeights(Eigen::MatrixXd w);

  static PenaltyWeights uniform(std::size_t p, double value);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(w_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return w_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  bool is_infinite(std::size_t i, std::size_t j) const { return (*this)(i, j) == kInfinite; }
  const Eigen::MatrixXd& matrix() const noexcept { return w_; }

 private:
  Eigen::MatrixXd w_;
};

struct SolverOptions {
  double outer_tol = 1e-5;
  double inner_tol = 1e-7;
  int max_outer = 200;
  int max_inner = 1000;

  /// Throws ConfigError if any field is not positive.
  void validate() const;
};

/// Working covariance W and the per-column lasso coefficients; carried
/// between solves to warm-start along a lambda path.
struct GlassoState {
  Eigen::MatrixXd w;
  Eigen::MatrixXd beta;
};

struct GlassoResult {
  PrecisionEstimate estimate;
  GlassoState state;
  int sweeps = 0;
  double last_change = 0.0;
  /// log|W| after each sweep. The sweeps maximize it blockwise, so the
  /// sequence is non-decreasing.
  std::vector<double> log_det_w_trace;
};

/// Entries with |omega_ij| below this multiple of max_i omega_ii are set to 0.
inline constexpr double kZeroThreshold = 1e-8;

/// sign(x) * max(|x| - t, 0).
double soft_threshold(double x, double t);

/// Maximizes log|Omega| - tr(S Omega) - sum_ij w_ij |omega_ij| by block
/// coordinate descent on the working covariance W = Omega^{-1}.
///
/// Throws NotPositiveDefinite when S + diag(w) is not PD, and NoConvergence
/// when max_outer sweeps pass without the change in W dropping below
/// outer_tol * mean|s_ij| (i != j).
PrecisionEstimate solve_weighted_glasso(const SymMatrix& s, const PenaltyWeights& w,
                                        const SolverOptions& opts = {});

/// As above, optionally starting from a previous solve's state.
GlassoResult solve_weighted_glasso_detailed(const SymMatrix& s, const PenaltyWeights& w,
                                            const SolverOptions& opts,
                                            const GlassoState* warm_start = nullptr);

/// Largest violation of the stationarity conditions of the weighted problem.
double kkt_residual(const SymMatrix& s, const PrecisionEstimate& est, const PenaltyWeights& w);

/// log|Omega| - tr(S Omega) - sum_ij w_ij |omega_ij|, with inf * 0 taken as 0.
double penalized_objective(const SymMatrix& s, const PrecisionEstimate& est,
                           const PenaltyWeights& w);

}  // namespace penprec
