#include "penprec/penalty.hpp"

#include <cmath>

#include "penprec/errors.hpp"

namespace penprec {

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Lasso:
      return "lasso";
    case PenaltyKind::AdaptiveLasso:
      return "adaptive";
    case PenaltyKind::Scad:
      return "scad";
  }
  return "unknown";
}

std::optional<PenaltyKind> parse_penalty_kind(std::string_view name) {
  if (name == "lasso") return PenaltyKind::Lasso;
  if (name == "adaptive" || name == "adaptive_lasso" || name == "alasso") {
    return PenaltyKind::AdaptiveLasso;
  }
  if (name == "scad") return PenaltyKind::Scad;
  return std::nullopt;
}

void PenaltyConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(a > 2.0)) throw ConfigError("SCAD parameter a must be > 2");
  if (lla_steps < 1) throw ConfigError("lla_steps must be >= 1");
  if (initial_lambda && !(*initial_lambda >= 0.0)) {
    throw ConfigError("initial lambda must be >= 0");
  }
}

double scad_derivative(double x, double lambda, double a) {
  if (x <= lambda) return lambda;
  return std::max(a * lambda - x, 0.0) / (a - 1.0);
}

PenaltyWeights lasso_weights(const PenaltyConfig& cfg, std::size_t p) {
  return PenaltyWeights::uniform(p, cfg.lambda);
}

PenaltyWeights adaptive_weights(const PenaltyConfig& cfg, const PrecisionEstimate& initial) {
  const Eigen::MatrixXd& o = initial.omega().matrix();
  Eigen::MatrixXd w(o.rows(), o.cols());
  for (Eigen::Index j = 0; j < o.cols(); ++j) {
    for (Eigen::Index i = 0; i < o.rows(); ++i) {
      const double mag = std::abs(o(i, j));
      w(i, j) = mag == 0.0 ? PenaltyWeights::kInfinite : cfg.lambda / std::pow(mag, cfg.gamma);
    }
  }
  return PenaltyWeights(std::move(w));
}

PenaltyWeights scad_weights(const PenaltyConfig& cfg, const PrecisionEstimate& initial) {
  const Eigen::MatrixXd& o = initial.omega().matrix();
  Eigen::MatrixXd w(o.rows(), o.cols());
  for (Eigen::Index j = 0; j < o.cols(); ++j) {
    for (Eigen::Index i = 0; i < o.rows(); ++i) {
      w(i, j) = scad_derivative(std::abs(o(i, j)), cfg.lambda, cfg.a);
    }
  }
  return PenaltyWeights(std::move(w));
}

PenalizedFitter::PenalizedFitter(PenaltyConfig cfg, SolverOptions opts)
    : cfg_(std::move(cfg)), opts_(opts) {
  cfg_.validate();
  opts_.validate();
}

PrecisionEstimate PenalizedFitter::solve_stage(std::size_t stage, const SymMatrix& s,
                                               const PenaltyWeights& w) {
  if (warm_.size() <= stage) warm_.resize(stage + 1);
  const GlassoState* warm = warm_[stage] ? &*warm_[stage] : nullptr;
  GlassoResult r = solve_weighted_glasso_detailed(s, w, opts_, warm);
  warm_[stage] = std::move(r.state);
  return std::move(r.estimate);
}

PrecisionEstimate PenalizedFitter::fit(const SymMatrix& s, double lambda) {
  PenaltyConfig cfg = cfg_;
  cfg.lambda = lambda;
  cfg.validate();
  const std::size_t p = s.dim();

  if (cfg.kind == PenaltyKind::Lasso) return solve_stage(0, s, lasso_weights(cfg, p));

  PenaltyConfig initial_cfg = cfg;
  initial_cfg.lambda = cfg.initial_lambda.value_or(lambda);
  PrecisionEstimate current = solve_stage(0, s, lasso_weights(initial_cfg, p));
  if (cfg.kind == PenaltyKind::AdaptiveLasso) {
    return solve_stage(1, s, adaptive_weights(cfg, current));
  }
  for (int step = 0; step < cfg.lla_steps; ++step) {
    current = solve_stage(static_cast<std::size_t>(step) + 1, s, scad_weights(cfg, current));
  }
  return current;
}

PrecisionEstimate fit_with_penalty(const SymMatrix& s, const PenaltyConfig& cfg,
                                   const SolverOptions& opts) {
  PenalizedFitter fitter(cfg, opts);
  return fitter.fit(s, cfg.lambda);
}

}  // namespace penprec
