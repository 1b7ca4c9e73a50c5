#include "penprec/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "penprec/errors.hpp"

namespace penprec {

Direction direction_of(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Bic:
    case SelectorKind::Aic:
      return Direction::Minimize;
    case SelectorKind::Loocv:
    case SelectorKind::Kcv:
    case SelectorKind::Gacv:
      return Direction::Maximize;
  }
  return Direction::Maximize;
}

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Loocv:
      return "loocv";
    case SelectorKind::Kcv:
      return "kcv";
    case SelectorKind::Gacv:
      return "gacv";
    case SelectorKind::Bic:
      return "bic";
    case SelectorKind::Aic:
      return "aic";
  }
  return "unknown";
}

std::optional<SelectorKind> parse_selector_kind(std::string_view name) {
  if (name == "loocv" || name == "cv") return SelectorKind::Loocv;
  if (name == "kcv") return SelectorKind::Kcv;
  if (name == "gacv") return SelectorKind::Gacv;
  if (name == "bic") return SelectorKind::Bic;
  if (name == "aic") return SelectorKind::Aic;
  return std::nullopt;
}

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("LambdaGrid: empty grid");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("LambdaGrid: values must be positive and finite");
    }
    if (i > 0 && !(values_[i] < values_[i - 1])) {
      throw std::invalid_argument("LambdaGrid: values must be strictly decreasing");
    }
  }
}

LambdaGrid LambdaGrid::log_spaced(double lambda_max, std::size_t count, double ratio) {
  if (count < 2) throw ConfigError("lambda grid needs at least 2 points");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("lambda grid ratio must be in (0, 1)");
  if (!(lambda_max > 0.0)) throw DegenerateInput("lambda_max must be positive");
  std::vector<double> v(count);
  const double step = std::log(ratio) / static_cast<double>(count - 1);
  v.front() = lambda_max;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    v[i] = lambda_max * std::exp(step * static_cast<double>(i));
  }
  v.back() = lambda_max * ratio;
  return LambdaGrid(std::move(v));
}

LambdaGrid lambda_grid(const SymMatrix& s, std::size_t count, double ratio) {
  double lmax = 0.0;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    for (std::size_t i = 0; i < j; ++i) lmax = std::max(lmax, std::abs(s(i, j)));
  }
  if (lmax == 0.0) {
    throw DegenerateInput("lambda_grid: all off-diagonal covariances are zero");
  }
  return LambdaGrid::log_spaced(lmax, count, ratio);
}

std::size_t count_support(const PrecisionEstimate& est) { return est.support().size(); }

namespace {

double neg_loglik(const SymMatrix& s, const PrecisionEstimate& est) {
  return -gaussian_loglik(s, est);
}

}  // namespace

double bic_score(const SymMatrix& s, const PrecisionEstimate& est, std::size_t n) {
  const double nn = static_cast<double>(n);
  return neg_loglik(s, est) + static_cast<double>(count_support(est)) * std::log(nn) / nn;
}

double aic_score(const SymMatrix& s, const PrecisionEstimate& est, std::size_t n) {
  const double nn = static_cast<double>(n);
  return neg_loglik(s, est) + 2.0 * static_cast<double>(count_support(est)) / nn;
}

GacvTerms gacv_terms(const DataMatrix& d, const SymMatrix& s, const PrecisionEstimate& est) {
  const std::size_t n = d.rows();
  if (n < 3) throw TooFewRows("gacv_score: need at least 3 observations");
  const Eigen::MatrixXd& omega = est.omega().matrix();
  const Eigen::MatrixXd& w = est.w_inv().matrix();
  const Eigen::MatrixXd a = omega * s.matrix() * omega;

  std::vector<IndexPair> mask;
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    for (Eigen::Index i = 0; i < omega.rows(); ++i) {
      if (omega(i, j) != 0.0) {
        mask.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }

  double correction = 0.0;
  Eigen::VectorXd u;
  for (Eigen::Index r = 0; r < d.values().rows(); ++r) {
    const Eigen::VectorXd x = d.values().row(r).transpose();
    u.noalias() = omega * x;
    double term = 0.0;
    for (const auto& [i, j] : mask) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      const double grad = w(ii, jj) - x(ii) * x(jj);
      const double shift = u(ii) * u(jj) - a(ii, jj);
      term += grad * shift;
    }
    correction += term;
  }
  correction /= static_cast<double>(n - 1);
  return GacvTerms{static_cast<double>(n) * gaussian_loglik(s, est), correction};
}

double gacv_score(const DataMatrix& d, const SymMatrix& s, const PrecisionEstimate& est) {
  return gacv_terms(d, s, est).total();
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, RandomStream& rng) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (k > n) {
    throw FoldTooSmall("cannot split " + std::to_string(n) + " rows into " + std::to_string(k) +
                       " non-empty folds");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Fisher-Yates with an explicit draw keeps the split independent of the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  std::sort(folds.begin(), folds.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return folds;
}

namespace {

// Shared by the grid and single-lambda entry points; the latter allow lambda = 0.
std::vector<double> cv_scores(const DataMatrix& d,
                              const std::vector<std::vector<std::size_t>>& folds,
                              const PenaltyConfig& cfg, const std::vector<double>& grid,
                              const SolverOptions& opts) {
  const Eigen::MatrixXd& x = d.values();
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<double> scores(grid.size(), 0.0);
  std::vector<bool> failed(grid.size(), false);
  std::vector<bool> held(n);

  for (const auto& fold : folds) {
    if (fold.empty()) throw FoldTooSmall("cross-validation fold has no rows");
    std::fill(held.begin(), held.end(), false);
    for (std::size_t i : fold) held[i] = true;
    Eigen::MatrixXd train(static_cast<Eigen::Index>(n - fold.size()), x.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!held[i]) train.row(r++) = x.row(static_cast<Eigen::Index>(i));
    }
    const SymMatrix s_train = SymMatrix::symmetrized(
        (train.transpose() * train) / static_cast<double>(train.rows()));

    PenalizedFitter fitter(cfg, opts);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      try {
        const PrecisionEstimate est = fitter.fit(s_train, grid[g]);
        const Eigen::MatrixXd& omega = est.omega().matrix();
        double quad = 0.0;
        for (std::size_t i : fold) {
          const auto row = x.row(static_cast<Eigen::Index>(i));
          quad += row * omega * row.transpose();
        }
        scores[g] += static_cast<double>(fold.size()) * est.log_det() - quad;
      } catch (const NumericalError&) {
        failed[g] = true;
        fitter.reset();
      }
    }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (failed[g]) scores[g] = std::numeric_limits<double>::quiet_NaN();
  }
  return scores;
}

}  // namespace

std::vector<double> cv_path_scores(const DataMatrix& d,
                                   const std::vector<std::vector<std::size_t>>& folds,
                                   const PenaltyConfig& cfg, const LambdaGrid& grid,
                                   const SolverOptions& opts) {
  return cv_scores(d, folds, cfg, grid.values(), opts);
}

namespace {

double single_cv_score(const DataMatrix& d, const std::vector<std::vector<std::size_t>>& folds,
                       double lambda, const PenaltyConfig& cfg, const SolverOptions& opts) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and nonnegative");
  }
  const double score = cv_scores(d, folds, cfg, {lambda}, opts).front();
  if (std::isnan(score)) throw NumericalError("cross-validation fit failed");
  return score;
}

}  // namespace

double kfold_cv_score(const DataMatrix& d, std::size_t k, double lambda, const PenaltyConfig& cfg,
                      const SolverOptions& opts, RandomStream& rng) {
  return single_cv_score(d, make_folds(d.rows(), k, rng), lambda, cfg, opts);
}

namespace {

std::vector<std::vector<std::size_t>> singleton_folds(std::size_t n) {
  std::vector<std::vector<std::size_t>> folds(n);
  for (std::size_t i = 0; i < n; ++i) folds[i] = {i};
  return folds;
}

}  // namespace

double loocv_score(const DataMatrix& d, double lambda, const PenaltyConfig& cfg,
                   const SolverOptions& opts) {
  if (d.rows() < 3) throw TooFewRows("loocv_score: need at least 3 observations");
  return single_cv_score(d, singleton_folds(d.rows()), lambda, cfg, opts);
}

std::vector<std::optional<PrecisionEstimate>> fit_path(const SymMatrix& s,
                                                       const PenaltyConfig& cfg,
                                                       const LambdaGrid& grid,
                                                       const SolverOptions& opts) {
  std::vector<std::optional<PrecisionEstimate>> out;
  out.reserve(grid.size());
  PenalizedFitter fitter(cfg, opts);
  for (double lambda : grid.values()) {
    try {
      out.emplace_back(fitter.fit(s, lambda));
    } catch (const NumericalError&) {
      out.emplace_back(std::nullopt);
      fitter.reset();
    }
  }
  return out;
}

std::size_t choose_index(const std::vector<double>& scores, Direction direction) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) continue;
    if (!best) {
      best = i;
      continue;
    }
    const bool better = direction == Direction::Maximize ? scores[i] > scores[*best]
                                                         : scores[i] < scores[*best];
    if (better) best = i;
  }
  if (!best) throw NumericalError("no grid point could be scored");
  return *best;
}

std::vector<SelectionResult> select_many(const DataMatrix& d, const PenaltyConfig& cfg,
                                         const std::vector<SelectorKind>& kinds,
                                         const LambdaGrid& grid, const SolverOptions& opts,
                                         RandomStream& rng, std::size_t folds) {
  const SymMatrix s = sample_covariance(d);
  const std::size_t n = d.rows();
  const auto path = fit_path(s, cfg, grid, opts);

  std::vector<SelectionResult> results;
  results.reserve(kinds.size());
  for (SelectorKind kind : kinds) {
    std::vector<double> scores(grid.size(), std::numeric_limits<double>::quiet_NaN());
    switch (kind) {
      case SelectorKind::Bic:
      case SelectorKind::Aic:
      case SelectorKind::Gacv:
        for (std::size_t g = 0; g < grid.size(); ++g) {
          if (!path[g]) continue;
          if (kind == SelectorKind::Bic) {
            scores[g] = bic_score(s, *path[g], n);
          } else if (kind == SelectorKind::Aic) {
            scores[g] = aic_score(s, *path[g], n);
          } else {
            scores[g] = gacv_score(d, s, *path[g]);
          }
        }
        break;
      case SelectorKind::Loocv:
        if (n < 3) throw TooFewRows("loocv: need at least 3 observations");
        scores = cv_path_scores(d, singleton_folds(n), cfg, grid, opts);
        break;
      case SelectorKind::Kcv:
        scores = cv_path_scores(d, make_folds(n, folds, rng), cfg, grid, opts);
        break;
    }

    std::vector<std::size_t> skipped;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!path[g] || !std::isfinite(scores[g])) {
        skipped.push_back(g);
        scores[g] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    const Direction dir = direction_of(kind);
    const std::size_t chosen = choose_index(scores, dir);
    results.push_back(SelectionResult{grid, SelectorScores{kind, dir, std::move(scores)}, chosen,
                                      grid[chosen], *path[chosen], std::move(skipped)});
  }
  return results;
}

SelectionResult select(const DataMatrix& d, const PenaltyConfig& cfg, SelectorKind kind,
                       const LambdaGrid& grid, const SolverOptions& opts, RandomStream& rng,
                       std::size_t folds) {
  return std::move(select_many(d, cfg, {kind}, grid, opts, rng, folds).front());
}

}  // namespace penprec
