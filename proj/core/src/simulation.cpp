#include "penprec/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "penprec/errors.hpp"

namespace penprec {

FrobeniusLoss frobenius_loss(const SymMatrix& truth, const PrecisionEstimate& est) {
  if (truth.dim() != est.dim()) throw std::invalid_argument("frobenius_loss: size mismatch");
  const double sq = (truth.matrix() - est.omega().matrix()).squaredNorm();
  return FrobeniusLoss{std::sqrt(sq), sq};
}

double entropy_loss(const SymMatrix& truth, const PrecisionEstimate& est) {
  if (truth.dim() != est.dim()) throw std::invalid_argument("entropy_loss: size mismatch");
  const CholeskyFactor f = cholesky(truth);
  const SymMatrix sigma = inverse_spd(f);
  const double p = static_cast<double>(truth.dim());
  return -(est.log_det() - log_det(f)) + trace_product(sigma, est.omega()) - p;
}

SupportErrors count_fp_fn(const SymMatrix& truth, const PrecisionEstimate& est) {
  if (truth.dim() != est.dim()) throw std::invalid_argument("count_fp_fn: size mismatch");
  SupportErrors e{0, 0};
  const std::size_t p = truth.dim();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      if (i == j) continue;
      const bool true_nz = truth(i, j) != 0.0;
      const bool est_nz = est.omega()(i, j) != 0.0;
      if (!true_nz && est_nz) ++e.fp;
      if (true_nz && !est_nz) ++e.fn;
    }
  }
  return e;
}

std::uint64_t matrix_hash(const SymMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const Eigen::MatrixXd& a = m.matrix();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, a.data() + k, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t double_bits(double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

RandomStream cell_stream(const RandomStream& base, const ScenarioSpec& spec, std::size_t n) {
  return base.spawn(static_cast<std::uint64_t>(spec.kind))
      .spawn(spec.p)
      .spawn(n)
      .spawn(double_bits(spec.sparse_zero_prob));
}

ReplicationResult failed_result(const ReplicationResult& base) {
  ReplicationResult r = base;
  r.chosen_lambda = kNaN;
  r.frobenius = kNaN;
  r.frobenius_squared = kNaN;
  r.entropy = kNaN;
  r.fp = 0;
  r.fn = 0;
  r.converged = false;
  return r;
}

}  // namespace

std::vector<ReplicationResult> run_replication_cell(
    const ScenarioSpec& spec, std::size_t n, const std::vector<PenaltyConfig>& penalties,
    const std::vector<SelectorKind>& selectors, const GridParams& grid,
    const SolverOptions& opts, const RandomStream& stream, std::size_t rep_index,
    const SymMatrix* fixed_truth) {
  RandomStream truth_stream = stream.spawn(0);
  RandomStream data_stream = stream.spawn(1);
  const SymMatrix truth = fixed_truth ? *fixed_truth : make_truth(spec, truth_stream);
  const CholeskyFactor sigma = cholesky(inverse_spd(cholesky(truth)));
  const DataMatrix data = sample_mvn(sigma, n, data_stream);
  const SymMatrix s = sample_covariance(data);

  ReplicationResult base;
  base.rep_index = rep_index;
  base.scenario = spec.kind;
  base.p = spec.p;
  base.n = n;
  base.data_hash = matrix_hash(s);

  std::optional<LambdaGrid> lambdas;
  try {
    lambdas = lambda_grid(s, grid.count, grid.ratio);
  } catch (const NumericalError&) {
  }

  std::vector<ReplicationResult> out;
  out.reserve(penalties.size() * selectors.size());
  for (const PenaltyConfig& cfg : penalties) {
    base.penalty = cfg.kind;
    std::vector<SelectionResult> selections;
    if (lambdas) {
      RandomStream fold_stream = stream.spawn(2);
      try {
        selections = select_many(data, cfg, selectors, *lambdas, opts, fold_stream, grid.folds);
      } catch (const NumericalError&) {
        selections.clear();
      }
    }
    for (std::size_t k = 0; k < selectors.size(); ++k) {
      base.selector = selectors[k];
      if (selections.empty()) {
        out.push_back(failed_result(base));
        continue;
      }
      const SelectionResult& sel = selections[k];
      ReplicationResult r = base;
      r.chosen_lambda = sel.chosen_lambda;
      try {
        const FrobeniusLoss fl = frobenius_loss(truth, sel.estimate);
        r.frobenius = fl.norm;
        r.frobenius_squared = fl.squared;
        r.entropy = entropy_loss(truth, sel.estimate);
        const SupportErrors e = count_fp_fn(truth, sel.estimate);
        r.fp = e.fp;
        r.fn = e.fn;
        r.converged = sel.skipped.empty();
        out.push_back(r);
      } catch (const NumericalError&) {
        out.push_back(failed_result(base));
      }
    }
  }
  return out;
}

ReplicationResult run_replication(const ScenarioSpec& spec, std::size_t n,
                                  const PenaltyConfig& cfg, SelectorKind selector,
                                  const GridParams& grid, const SolverOptions& opts,
                                  std::uint64_t rep_seed) {
  spec.validate();
  return run_replication_cell(spec, n, {cfg}, {selector}, grid, opts, RandomStream(rep_seed))
      .front();
}

void StudyConfig::validate() const {
  if (scenarios.empty()) throw ConfigError("study needs at least one scenario");
  if (n_values.empty()) throw ConfigError("study needs at least one sample size");
  if (penalties.empty()) throw ConfigError("study needs at least one penalty");
  if (selectors.empty()) throw ConfigError("study needs at least one selector");
  if (reps < 2) throw ConfigError("study needs at least 2 replications");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (grid.count < 2) throw ConfigError("grid count must be >= 2");
  if (!(grid.ratio > 0.0 && grid.ratio < 1.0)) throw ConfigError("grid ratio must be in (0, 1)");
  for (const auto& s : scenarios) s.validate();
  for (const auto& p : penalties) p.validate();
  solver.validate();
  const bool uses_kcv =
      std::find(selectors.begin(), selectors.end(), SelectorKind::Kcv) != selectors.end();
  for (std::size_t n : n_values) {
    if (n < 3) throw ConfigError("sample sizes must be >= 3");
    if (uses_kcv && (grid.folds < 2 || grid.folds > n)) {
      throw ConfigError("folds must be between 2 and every sample size");
    }
  }
}

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();
  const RandomStream root(cfg.root_seed);

  struct Item {
    std::size_t scenario;
    std::size_t n;
    std::size_t rep;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < cfg.n_values.size(); ++k) {
      for (std::size_t r = 0; r < cfg.reps; ++r) items.push_back({s, k, r});
    }
  }

  std::vector<std::optional<SymMatrix>> fixed(cfg.scenarios.size());
  if (!cfg.redraw_sparse) {
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
      if (cfg.scenarios[s].kind != ScenarioKind::RandomSparse) continue;
      RandomStream ts = cell_stream(root.spawn(std::numeric_limits<std::uint64_t>::max()),
                                    cfg.scenarios[s], 0);
      fixed[s] = make_truth(cfg.scenarios[s], ts);
    }
  }

  std::vector<std::vector<ReplicationResult>> per_item(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const Item& it = items[i];
      const ScenarioSpec& spec = cfg.scenarios[it.scenario];
      const std::size_t n = cfg.n_values[it.n];
      const RandomStream stream = cell_stream(root.spawn(it.rep), spec, n);
      per_item[i] = run_replication_cell(spec, n, cfg.penalties, cfg.selectors, cfg.grid,
                                         cfg.solver, stream, it.rep,
                                         fixed[it.scenario] ? &*fixed[it.scenario] : nullptr);
    }
  };
  const std::size_t threads = std::min(cfg.jobs, items.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  StudyResult result;
  for (auto& v : per_item) {
    result.raw.insert(result.raw.end(), v.begin(), v.end());
  }
  result.summary = summarize(result.raw);
  return result;
}

namespace {

MeasureStats stats_of(const std::vector<double>& xs) {
  MeasureStats m;
  if (xs.empty()) return MeasureStats{kNaN, kNaN};
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    m.sd = kNaN;
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

}  // namespace

StudySummary summarize(const std::vector<ReplicationResult>& raw) {
  using Key = std::tuple<ScenarioKind, std::size_t, std::size_t, PenaltyKind, SelectorKind>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ReplicationResult*>> groups;
  for (const auto& r : raw) {
    Key key{r.scenario, r.p, r.n, r.penalty, r.selector};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  StudySummary summary;
  for (const Key& key : order) {
    const auto& members = groups.at(key);
    CellSummary c{};
    std::tie(c.scenario, c.p, c.n, c.penalty, c.selector) = key;
    std::vector<double> lam, fro, fro2, ent, fp, fn;
    std::size_t recovered = 0;
    for (const ReplicationResult* r : members) {
      if (!r->converged) {
        ++c.failed;
        continue;
      }
      lam.push_back(r->chosen_lambda);
      fro.push_back(r->frobenius);
      fro2.push_back(r->frobenius_squared);
      ent.push_back(r->entropy);
      fp.push_back(static_cast<double>(r->fp));
      fn.push_back(static_cast<double>(r->fn));
      if (r->support_recovered()) ++recovered;
    }
    c.count = lam.size();
    c.lambda = stats_of(lam);
    c.frobenius = stats_of(fro);
    c.frobenius_squared = stats_of(fro2);
    c.entropy = stats_of(ent);
    c.fp = stats_of(fp);
    c.fn = stats_of(fn);
    c.recovery_rate = c.count > 0 ? static_cast<double>(recovered) / static_cast<double>(c.count)
                                  : kNaN;
    summary.cells.push_back(c);
  }
  return summary;
}

const CellSummary& StudySummary::cell(ScenarioKind scenario, std::size_t n, PenaltyKind penalty,
                                      SelectorKind selector) const {
  for (const auto& c : cells) {
    if (c.scenario == scenario && c.n == n && c.penalty == penalty && c.selector == selector) {
      return c;
    }
  }
  throw std::out_of_range("StudySummary: no such cell");
}

}  // namespace penprec
