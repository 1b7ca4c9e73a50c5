#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "penprec/estimate.hpp"
#include "penprec/glasso.hpp"

namespace penprec {

enum class PenaltyKind { Lasso, AdaptiveLasso, Scad };

std::string_view to_string(PenaltyKind kind);
/// Accepts "lasso", "adaptive" / "adaptive_lasso", "scad".
std::optional<PenaltyKind> parse_penalty_kind(std::string_view name);

struct PenaltyConfig {
  PenaltyKind kind = PenaltyKind::Lasso;
  double lambda = 0.0;
  /// Adaptive-lasso exponent.
  double gamma = 0.5;
  /// SCAD shape parameter.
  double a = 3.7;
  /// Number of local linear approximation steps for SCAD.
  int lla_steps = 1;
  /// Lambda of the lasso initial estimator. Unset: same as `lambda`.
  std::optional<double> initial_lambda;

  void validate() const;
};

/// SCAD penalty derivative p'_lambda(x) for x >= 0:
/// lambda on [0, lambda], (a*lambda - x)_+ / (a - 1) beyond.
double scad_derivative(double x, double lambda, double a);

PenaltyWeights lasso_weights(const PenaltyConfig& cfg, std::size_t p);

/// lambda / |initial_ij|^gamma, infinite where the initial entry is zero.
PenaltyWeights adaptive_weights(const PenaltyConfig& cfg, const PrecisionEstimate& initial);

/// One-step LLA weights: scad_derivative(|initial_ij|, lambda, a).
PenaltyWeights scad_weights(const PenaltyConfig& cfg, const PrecisionEstimate& initial);

/// Fits the penalized estimator at cfg.lambda. Adaptive lasso and SCAD are
/// two-stage: a lasso fit supplies the initial estimate for the weights.
PrecisionEstimate fit_with_penalty(const SymMatrix& s, const PenaltyConfig& cfg,
                                   const SolverOptions& opts = {});

/// Repeated fits along a lambda path, warm-starting every stage from the
/// previous call. `reset` drops the warm state.
class PenalizedFitter {
 public:
  PenalizedFitter(PenaltyConfig cfg, SolverOptions opts);

  PrecisionEstimate fit(const SymMatrix& s, double lambda);
  void reset() { warm_.clear(); }

  const PenaltyConfig& config() const noexcept { return cfg_; }

 private:
  PrecisionEstimate solve_stage(std::size_t stage, const SymMatrix& s, const PenaltyWeights& w);

  PenaltyConfig cfg_;
  SolverOptions opts_;
  std::vector<std::optional<GlassoState>> warm_;
};

}  // namespace penprec
