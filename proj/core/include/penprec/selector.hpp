#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "penprec/estimate.hpp"
#include "penprec/glasso.hpp"
#include "penprec/matrix.hpp"
#include "penprec/penalty.hpp"
#include "penprec/random.hpp"

namespace penprec {

enum class SelectorKind { Loocv, Kcv, Gacv, Bic, Aic };
enum class Direction { Maximize, Minimize };

Direction direction_of(SelectorKind kind);
std::string_view to_string(SelectorKind kind);
/// Accepts "loocv" (or "cv"), "kcv", "gacv", "bic", "aic".
std::optional<SelectorKind> parse_selector_kind(std::string_view name);

/// Strictly decreasing positive tuning parameters.
class LambdaGrid {
 public:
  explicit LambdaGrid(std::vector<double> values);

  /// `count` values log-spaced from lambda_max down to lambda_max * ratio.
  static LambdaGrid log_spaced(double lambda_max, std::size_t count, double ratio);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Grid starting at lambda_max = max_{i != j} |s_ij|, the smallest uniform
/// lasso weight giving a diagonal estimate. Throws DegenerateInput when S is
/// diagonal.
LambdaGrid lambda_grid(const SymMatrix& s, std::size_t count = 50, double ratio = 1e-4);

struct SelectorScores {
  SelectorKind selector;
  Direction direction;
  /// One score per grid point; NaN where the fit failed.
  std::vector<double> values;
};

struct SelectionResult {
  LambdaGrid grid;
  SelectorScores scores;
  std::size_t chosen_index;
  double chosen_lambda;
  PrecisionEstimate estimate;
  /// Grid points excluded because a fit failed.
  std::vector<std::size_t> skipped;
};

/// Nonzero entries on and above the diagonal.
std::size_t count_support(const PrecisionEstimate& est);

/// -log|Omega| + tr(S Omega) + k log(n) / n. Minimized.
double bic_score(const SymMatrix& s, const PrecisionEstimate& est, std::size_t n);

/// -log|Omega| + tr(S Omega) + 2k / n. Minimized.
double aic_score(const SymMatrix& s, const PrecisionEstimate& est, std::size_t n);

/// The two parts of the generalized approximate cross-validation score.
struct GacvTerms {
  /// n * L(S, Omega).
  double fit;
  /// First-order leave-one-out correction, summed over observations.
  double correction;
  double total() const noexcept { return fit + correction; }
};

/// Closed-form approximation to the leave-one-out log-likelihood:
///
///   n L(S, Omega) + sum_i <Omega^{-1} - X_i, Omega (X_i - S) Omega / (n - 1)>_M
///
/// where X_i = x_i x_i^T and the inner product runs over the positions M
/// where Omega is nonzero (both triangles). Maximized. Costs O(n |M|).
GacvTerms gacv_terms(const DataMatrix& d, const SymMatrix& s, const PrecisionEstimate& est);
double gacv_score(const DataMatrix& d, const SymMatrix& s, const PrecisionEstimate& est);

/// Splits rows 0..n-1 into `k` folds of near-equal size by a seeded random
/// permutation. Rows within a fold are sorted and folds are ordered by their
/// first row, so that k == n yields the singleton folds {0}, {1}, ...
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, RandomStream& rng);

/// sum_k n_k (log|Omega^(-k)| - tr(S^(k) Omega^(-k))), where S^(k) is the
/// held-out covariance of fold k and Omega^(-k) is fitted without fold k.
/// NaN at grid points where some fold fit failed. Each fold is warm-started
/// along the grid.
std::vector<double> cv_path_scores(const DataMatrix& d,
                                   const std::vector<std::vector<std::size_t>>& folds,
                                   const PenaltyConfig& cfg, const LambdaGrid& grid,
                                   const SolverOptions& opts);

double kfold_cv_score(const DataMatrix& d, std::size_t k, double lambda, const PenaltyConfig& cfg,
                      const SolverOptions& opts, RandomStream& rng);

double loocv_score(const DataMatrix& d, double lambda, const PenaltyConfig& cfg,
                   const SolverOptions& opts);

/// Full-data fits along the grid with warm starts; nullopt where a fit failed.
std::vector<std::optional<PrecisionEstimate>> fit_path(const SymMatrix& s,
                                                       const PenaltyConfig& cfg,
                                                       const LambdaGrid& grid,
                                                       const SolverOptions& opts);

/// Index of the best finite score; ties go to the lower index (larger
/// lambda). Throws NumericalError if no score is finite.
std::size_t choose_index(const std::vector<double>& scores, Direction direction);

/// Scores every grid point under each selector and refits at the chosen
/// lambda. Results are returned in the order of `kinds`. The fold split for
/// KCV is drawn from `rng`.
std::vector<SelectionResult> select_many(const DataMatrix& d, const PenaltyConfig& cfg,
                                         const std::vector<SelectorKind>& kinds,
                                         const LambdaGrid& grid, const SolverOptions& opts,
                                         RandomStream& rng, std::size_t folds = 10);

SelectionResult select(const DataMatrix& d, const PenaltyConfig& cfg, SelectorKind kind,
                       const LambdaGrid& grid, const SolverOptions& opts, RandomStream& rng,
                       std::size_t folds = 10);

}  // namespace penprec
