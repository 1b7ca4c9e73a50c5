#include "penprec/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "penprec/errors.hpp"

namespace penprec {

PrecisionEstimate PrecisionEstimate::from_omega(SymMatrix omega) {
  const CholeskyFactor f = cholesky(omega);
  const std::size_t p = omega.dim();
  std::vector<IndexPair> support;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (omega(i, j) != 0.0) support.emplace_back(i, j);
    }
  }
  SymMatrix w_inv = inverse_spd(f);
  const double ld = penprec::log_det(f);
  return PrecisionEstimate(std::move(omega), std::move(w_inv), std::move(support), ld);
}

double gaussian_loglik(const SymMatrix& s, const PrecisionEstimate& omega) {
  return omega.log_det() - trace_product(s, omega.omega());
}

PenaltyWeights::PenaltyWeights(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() < 1 || w_.rows() != w_.cols()) {
    throw std::invalid_argument("PenaltyWeights: expected a non-empty square matrix");
  }
  for (Eigen::Index j = 0; j < w_.cols(); ++j) {
    if (!std::isfinite(w_(j, j))) {
      throw std::invalid_argument("PenaltyWeights: diagonal weights must be finite");
    }
    for (Eigen::Index i = 0; i < w_.rows(); ++i) {
      const double v = w_(i, j);
      if (std::isnan(v) || v < 0.0) {
        throw std::invalid_argument("PenaltyWeights: weights must be nonnegative");
      }
      if (v != w_(j, i)) {
        throw std::invalid_argument("PenaltyWeights: weights must be symmetric");
      }
    }
  }
}

PenaltyWeights PenaltyWeights::uniform(std::size_t p, double value) {
  const auto n = static_cast<Eigen::Index>(p);
  return PenaltyWeights(Eigen::MatrixXd::Constant(n, n, value));
}

void SolverOptions::validate() const {
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0) || max_outer <= 0 || max_inner <= 0) {
    throw ConfigError("solver options must all be positive");
  }
}

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

namespace {

double mean_abs_off_diagonal(const Eigen::MatrixXd& s) {
  const Eigen::Index p = s.rows();
  if (p < 2) return 0.0;
  const double total = s.cwiseAbs().sum() - s.diagonal().cwiseAbs().sum();
  return total / static_cast<double>(p * (p - 1));
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  try {
    cholesky(SymMatrix::symmetrized(m));
    return true;
  } catch (const NotPositiveDefinite&) {
    return false;
  }
}

double log_det_or_nan(const Eigen::MatrixXd& m) {
  try {
    return log_det(cholesky(SymMatrix::symmetrized(m)));
  } catch (const NotPositiveDefinite&) {
    return std::nan("");
  }
}

/// Cyclic coordinate descent for column j:
///   min_b 1/2 b' W11 b - s12' b + sum_k w_kj |b_k|
/// `v` holds W11 b on entry and is kept in sync.
void solve_column(const Eigen::MatrixXd& s, const PenaltyWeights& weights,
                  const Eigen::MatrixXd& w, Eigen::Ref<Eigen::VectorXd> beta,
                  Eigen::VectorXd& v, Eigen::Index j, const SolverOptions& opts) {
  const Eigen::Index p = s.rows();
  for (int it = 0; it < opts.max_inner; ++it) {
    double max_delta = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k == j) continue;
      const double old = beta(k);
      double next = 0.0;
      const double wk = weights(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
      if (wk != PenaltyWeights::kInfinite) {
        const double partial = s(k, j) - (v(k) - w(k, k) * old);
        next = soft_threshold(partial, wk) / w(k, k);
      }
      if (next != old) {
        const double delta = next - old;
        v.noalias() += w.col(k) * delta;
        beta(k) = next;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < opts.inner_tol) break;
  }
}

}  // namespace

GlassoResult solve_weighted_glasso_detailed(const SymMatrix& s_sym, const PenaltyWeights& weights,
                                            const SolverOptions& opts,
                                            const GlassoState* warm_start) {
  opts.validate();
  const Eigen::MatrixXd& s = s_sym.matrix();
  const Eigen::Index p = s.rows();
  if (weights.dim() != s_sym.dim()) {
    throw std::invalid_argument("solve_weighted_glasso: weight and covariance sizes differ");
  }

  const Eigen::VectorXd diag = s.diagonal() + weights.matrix().diagonal();
  Eigen::MatrixXd w = s;
  w.diagonal() = diag;
  if (!is_positive_definite(w)) {
    throw NotPositiveDefinite(
        "solve_weighted_glasso: S + diag(w) is not positive definite; a singular S needs "
        "positive diagonal weights");
  }
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, p);

  if (warm_start != nullptr && warm_start->w.rows() == p && warm_start->beta.rows() == p) {
    Eigen::MatrixXd candidate = warm_start->w;
    candidate.diagonal() = diag;
    if (is_positive_definite(candidate)) {
      w = std::move(candidate);
      beta = warm_start->beta;
    }
  }

  const double mean_off = mean_abs_off_diagonal(s);
  const double threshold = opts.outer_tol * (mean_off > 0.0 ? mean_off : 1.0);

  int sweeps = 0;
  double last_change = 0.0;
  std::vector<double> trace;
  bool converged = (p == 1);
  Eigen::VectorXd v(p);
  for (int sweep = 1; !converged && sweep <= opts.max_outer; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      auto bj = beta.col(j);
      bj(j) = 0.0;
      v.noalias() = w * bj;
      solve_column(s, weights, w, bj, v, j, opts);
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        max_change = std::max(max_change, std::abs(v(k) - w(k, j)));
        w(k, j) = v(k);
        w(j, k) = v(k);
      }
    }
    sweeps = sweep;
    last_change = max_change;
    trace.push_back(log_det_or_nan(w));
    converged = max_change < threshold;
  }
  if (!converged) {
    throw NoConvergence("solve_weighted_glasso: no convergence after " +
                            std::to_string(opts.max_outer) + " sweeps (last change " +
                            std::to_string(last_change) + ")",
                        sweeps, last_change);
  }

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double schur = w(j, j);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k != j) schur -= w(k, j) * beta(k, j);
    }
    const double ojj = 1.0 / schur;
    omega(j, j) = ojj;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k != j) omega(k, j) = -beta(k, j) * ojj;
    }
  }
  omega = 0.5 * (omega + omega.transpose()).eval();
  const double cutoff = kZeroThreshold * omega.diagonal().maxCoeff();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i != j && std::abs(omega(i, j)) < cutoff) omega(i, j) = 0.0;
    }
  }

  return GlassoResult{PrecisionEstimate::from_omega(SymMatrix(std::move(omega))),
                     GlassoState{std::move(w), std::move(beta)}, sweeps, last_change,
                     std::move(trace)};
}

PrecisionEstimate solve_weighted_glasso(const SymMatrix& s, const PenaltyWeights& w,
                                        const SolverOptions& opts) {
  return solve_weighted_glasso_detailed(s, w, opts, nullptr).estimate;
}

double kkt_residual(const SymMatrix& s, const PrecisionEstimate& est, const PenaltyWeights& w) {
  const std::size_t p = s.dim();
  double worst = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      if (w.is_infinite(i, j)) continue;
      const double grad = est.w_inv()(i, j) - s(i, j);
      const double o = est.omega()(i, j);
      double r = 0.0;
      if (o != 0.0) {
        r = std::abs(grad - w(i, j) * (o > 0.0 ? 1.0 : -1.0));
      } else {
        r = std::max(std::abs(grad) - w(i, j), 0.0);
      }
      worst = std::max(worst, r);
    }
  }
  return worst;
}

double penalized_objective(const SymMatrix& s, const PrecisionEstimate& est,
                           const PenaltyWeights& w) {
  double penalty = 0.0;
  const std::size_t p = s.dim();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      const double o = est.omega()(i, j);
      if (o != 0.0) penalty += w(i, j) * std::abs(o);
    }
  }
  return gaussian_loglik(s, est) - penalty;
}

}  // namespace penprec
