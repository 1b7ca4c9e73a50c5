#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "penprec/estimate.hpp"
#include "penprec/glasso.hpp"
#include "penprec/penalty.hpp"
#include "penprec/random.hpp"
#include "penprec/scenario.hpp"
#include "penprec/selector.hpp"

namespace penprec {

struct FrobeniusLoss {
  double norm;
  double squared;
};

FrobeniusLoss frobenius_loss(const SymMatrix& truth, const PrecisionEstimate& est);

/// -log|Omega0^{-1} Omega| + tr(Omega0^{-1} Omega) - p.
double entropy_loss(const SymMatrix& truth, const PrecisionEstimate& est);

struct SupportErrors {
  std::size_t fp;
  std::size_t fn;
};

/// False positives and negatives over all off-diagonal positions (both
/// triangles, so each symmetric pair counts twice).
SupportErrors count_fp_fn(const SymMatrix& truth, const PrecisionEstimate& est);

struct GridParams {
  std::size_t count = 50;
  double ratio = 1e-4;
  std::size_t folds = 10;
};

struct ReplicationResult {
  std::size_t rep_index = 0;
  ScenarioKind scenario = ScenarioKind::Tridiagonal;
  std::size_t p = 0;
  std::size_t n = 0;
  PenaltyKind penalty = PenaltyKind::Lasso;
  SelectorKind selector = SelectorKind::Bic;
  double chosen_lambda = 0.0;
  double frobenius = 0.0;
  double frobenius_squared = 0.0;
  double entropy = 0.0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  /// False if any fit on the grid failed; such results are left out of
  /// summaries.
  bool converged = true;
  /// Hash of the sample covariance, shared by every result of one dataset.
  std::uint64_t data_hash = 0;

  bool support_recovered() const noexcept { return converged && fp == 0 && fn == 0; }
};

/// FNV-1a over the bytes of the matrix entries.
std::uint64_t matrix_hash(const SymMatrix& m);

/// One dataset drawn from `stream`, scored under every penalty and selector.
/// Results are ordered by penalty, then selector. When `fixed_truth` is null
/// the truth is built from the stream (redrawn for RandomSparse).
std::vector<ReplicationResult> run_replication_cell(
    const ScenarioSpec& spec, std::size_t n, const std::vector<PenaltyConfig>& penalties,
    const std::vector<SelectorKind>& selectors, const GridParams& grid,
    const SolverOptions& opts, const RandomStream& stream, std::size_t rep_index = 0,
    const SymMatrix* fixed_truth = nullptr);

/// Single penalty and selector.
ReplicationResult run_replication(const ScenarioSpec& spec, std::size_t n,
                                  const PenaltyConfig& cfg, SelectorKind selector,
                                  const GridParams& grid, const SolverOptions& opts,
                                  std::uint64_t rep_seed);

struct MeasureStats {
  double mean = 0.0;
  double sd = 0.0;
};

struct CellSummary {
  ScenarioKind scenario;
  std::size_t p;
  std::size_t n;
  PenaltyKind penalty;
  SelectorKind selector;
  std::size_t count = 0;
  std::size_t failed = 0;
  MeasureStats lambda;
  MeasureStats frobenius;
  MeasureStats frobenius_squared;
  MeasureStats entropy;
  MeasureStats fp;
  MeasureStats fn;
  /// Fraction of replications whose support matches the truth exactly.
  double recovery_rate = 0.0;
};

struct StudySummary {
  std::vector<CellSummary> cells;

  /// Throws std::out_of_range when no such cell exists.
  const CellSummary& cell(ScenarioKind scenario, std::size_t n, PenaltyKind penalty,
                          SelectorKind selector) const;
};

struct StudyConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::size_t> n_values;
  std::vector<PenaltyConfig> penalties;
  std::vector<SelectorKind> selectors;
  std::size_t reps = 100;
  std::uint64_t root_seed = 20090101;
  GridParams grid;
  SolverOptions solver;
  /// Draw a new RandomSparse truth in every replication.
  bool redraw_sparse = true;
  std::size_t jobs = 1;

  void validate() const;
};

struct StudyResult {
  std::vector<ReplicationResult> raw;
  StudySummary summary;
};

/// Replication r of every (scenario, n) cell uses a stream derived from
/// root_seed and r, so the output does not depend on `jobs`.
StudyResult run_study(const StudyConfig& cfg);

/// Mean and sample standard deviation per cell over converged replications.
StudySummary summarize(const std::vector<ReplicationResult>& raw);

/// Line-per-record CSV: rep_index, scenario, n, penalty, selector,
/// chosen_lambda, frobenius, frobenius_squared, entropy, fp, fn,
/// converged_flag, data_hash.
void write_raw_dump(std::ostream& out, const std::vector<ReplicationResult>& raw);

/// One CSV row per cell with mean and sd columns for each measure.
void write_summary(std::ostream& out, const StudySummary& summary);

/// Human-readable tables: one block per (scenario, p, n, penalty), one column
/// per selector, "mean (sd)" per measure.
void print_tables(std::ostream& out, const StudySummary& summary);

}  // namespace penprec
