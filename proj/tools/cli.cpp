#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string_view>

#include "CLI11.hpp"
#include "penprec/errors.hpp"
#include "penprec/io.hpp"
#include "penprec/penalty.hpp"
#include "penprec/selector.hpp"
#include "penprec/simulation.hpp"

namespace penprec::cli {
namespace {

constexpr unsigned long long kBuiltinSeed = 20090101ULL;

struct FitArgs {
  std::string penalty = "lasso";
  double gamma = 0.5;
  double a = 3.7;
  int lla_iters = 1;
  std::optional<double> initial_lambda;
  std::size_t grid_count = 50;
  double grid_ratio = 1e-4;
  std::size_t folds = 10;
  SolverOptions solver;
};

struct EstimateArgs {
  std::string config;
  std::string input;
  std::string output;
  bool center = false;
  std::string selector = "bic";
  std::optional<double> lambda;
  unsigned long long seed = kBuiltinSeed;
  FitArgs fit;
};

struct PathArgs {
  std::string config;
  std::string input;
  std::string output;
  bool center = false;
  unsigned long long seed = kBuiltinSeed;
  FitArgs fit;
};

struct SimulateArgs {
  std::string config;
  std::string output;
  std::vector<std::string> scenarios{"tridiagonal"};
  std::size_t p = 20;
  double zero_prob = 0.8;
  std::vector<std::size_t> n_values{50, 100};
  std::vector<std::string> penalties{"lasso"};
  std::vector<std::string> selectors{"loocv", "kcv", "gacv", "bic", "aic"};
  std::size_t reps = 100;
  std::size_t jobs = 1;
  bool fixed_sparse = false;
  unsigned long long seed = kBuiltinSeed;
  FitArgs fit;
};

struct GraphArgs {
  std::string config;
  std::string input;
  std::string output;
};

void add_penalty_options(CLI::App* app, FitArgs& f) {
  app->add_option("--penalty", f.penalty, "lasso, adaptive or scad");
  app->add_option("--gamma", f.gamma, "Adaptive-lasso exponent")->check(CLI::PositiveNumber);
  app->add_option("--a", f.a, "SCAD shape parameter (> 2)");
  app->add_option("--lla-iters", f.lla_iters, "SCAD local linear approximation steps")
      ->check(CLI::Range(1, 100));
  app->add_option("--initial-lambda", f.initial_lambda,
                  "Lambda of the lasso initial estimate (default: same lambda)");
}

void add_grid_options(CLI::App* app, FitArgs& f) {
  app->add_option("--grid-count", f.grid_count, "Number of lambda values")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  app->add_option("--grid-ratio", f.grid_ratio, "Smallest lambda as a fraction of lambda_max")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--folds", f.folds, "K for K-fold cross-validation");
}

void add_solver_options(CLI::App* app, SolverOptions& s) {
  app->add_option("--outer-tol", s.outer_tol)->check(CLI::PositiveNumber);
  app->add_option("--inner-tol", s.inner_tol)->check(CLI::PositiveNumber);
  app->add_option("--max-outer", s.max_outer)->check(CLI::PositiveNumber);
  app->add_option("--max-inner", s.max_inner)->check(CLI::PositiveNumber);
}

/// Fills options not given on the command line from a key = value file.
void merge_config(CLI::App* app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  for (const auto& [key, value] : read_key_values(in)) {
    CLI::Option* opt = key == "config" ? nullptr : app->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

PenaltyKind penalty_kind(const std::string& name) {
  auto kind = parse_penalty_kind(name);
  if (!kind) throw ConfigError("unknown penalty '" + name + "'");
  return *kind;
}

SelectorKind selector_kind(const std::string& name) {
  auto kind = parse_selector_kind(name);
  if (!kind) throw ConfigError("unknown selector '" + name + "'");
  return *kind;
}

PenaltyConfig penalty_config(const FitArgs& f, const std::string& name) {
  PenaltyConfig cfg;
  cfg.kind = penalty_kind(name);
  cfg.gamma = f.gamma;
  cfg.a = f.a;
  cfg.lla_steps = f.lla_iters;
  cfg.initial_lambda = f.initial_lambda;
  cfg.validate();
  return cfg;
}

void validate_fit(const FitArgs& f) {
  if (f.grid_ratio <= 0.0 || f.grid_ratio >= 1.0) {
    throw ConfigError("grid-ratio must lie in (0, 1)");
  }
  if (f.folds < 2) throw ConfigError("folds must be at least 2");
  f.solver.validate();
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  require(a.input, "--input");
  require(a.output, "--output");
  validate_fit(a.fit);
  PenaltyConfig cfg = penalty_config(a.fit, a.fit.penalty);
  const SelectorKind kind = selector_kind(a.selector);
  if (a.lambda && *a.lambda < 0.0) throw ConfigError("lambda must be nonnegative");

  const DataMatrix d = ingest(a.input, a.center);
  const SymMatrix s = sample_covariance(d);

  std::optional<PrecisionEstimate> est;
  double chosen = 0.0;
  std::ofstream scores = open_output(a.output + "_scores.csv");
  if (a.lambda) {
    chosen = *a.lambda;
    cfg.lambda = chosen;
    est = fit_with_penalty(s, cfg, a.fit.solver);
    scores << "lambda,support_size\n"
           << format_double(chosen) << ',' << count_support(*est) << '\n';
  } else {
    const LambdaGrid grid = lambda_grid(s, a.fit.grid_count, a.fit.grid_ratio);
    RandomStream rng(a.seed);
    SelectionResult r = select(d, cfg, kind, grid, a.fit.solver, rng, a.fit.folds);
    for (std::size_t i : r.skipped) {
      err << "warning: grid point " << i << " (lambda " << format_double(grid.values()[i])
          << ") skipped\n";
    }
    chosen = r.chosen_lambda;
    est = std::move(r.estimate);
    scores << "lambda," << to_string(kind) << '\n';
    for (std::size_t i = 0; i < grid.values().size(); ++i) {
      scores << format_double(grid.values()[i]) << ',' << format_double(r.scores.values[i])
             << '\n';
    }
  }

  std::ofstream omega = open_output(a.output + "_omega.csv");
  write_matrix(omega, est->omega());
  std::ofstream edges = open_output(a.output + "_edges.txt");
  write_edges(edges, *est);
  std::ofstream lambda = open_output(a.output + "_lambda.txt");
  lambda << format_double(chosen) << '\n';

  out << "lambda " << chosen << ", " << count_support(*est) - est->dim()
      << " edges\n";
  return 0;
}

int cmd_path(const PathArgs& a, std::ostream& out) {
  require(a.input, "--input");
  validate_fit(a.fit);
  const PenaltyConfig cfg = penalty_config(a.fit, a.fit.penalty);

  const DataMatrix d = ingest(a.input, a.center);
  const SymMatrix s = sample_covariance(d);
  const LambdaGrid grid = lambda_grid(s, a.fit.grid_count, a.fit.grid_ratio);
  const std::vector<SelectorKind> kinds{SelectorKind::Loocv, SelectorKind::Kcv,
                                        SelectorKind::Gacv, SelectorKind::Bic, SelectorKind::Aic};
  RandomStream rng(a.seed);
  const auto results = select_many(d, cfg, kinds, grid, a.fit.solver, rng, a.fit.folds);
  const auto path = fit_path(s, cfg, grid, a.fit.solver);

  std::ofstream file;
  if (!a.output.empty()) file = open_output(a.output);
  std::ostream& dst = a.output.empty() ? out : file;
  dst << "lambda,support_size";
  for (SelectorKind k : kinds) dst << ',' << to_string(k);
  dst << '\n';
  for (std::size_t i = 0; i < grid.values().size(); ++i) {
    dst << format_double(grid.values()[i]) << ',';
    if (path[i]) dst << count_support(*path[i]);
    for (const auto& r : results) dst << ',' << format_double(r.scores.values[i]);
    dst << '\n';
  }
  return 0;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  require(a.output, "--output");
  validate_fit(a.fit);
  StudyConfig cfg;
  for (const auto& name : a.scenarios) {
    auto kind = parse_scenario_kind(name);
    if (!kind) throw ConfigError("unknown scenario '" + name + "'");
    cfg.scenarios.push_back(ScenarioSpec{*kind, a.p, a.zero_prob});
  }
  for (const auto& name : a.penalties) cfg.penalties.push_back(penalty_config(a.fit, name));
  for (const auto& name : a.selectors) cfg.selectors.push_back(selector_kind(name));
  cfg.n_values = a.n_values;
  cfg.reps = a.reps;
  cfg.root_seed = a.seed;
  cfg.grid = GridParams{a.fit.grid_count, a.fit.grid_ratio, a.fit.folds};
  cfg.solver = a.fit.solver;
  cfg.redraw_sparse = !a.fixed_sparse;
  cfg.jobs = a.jobs;
  cfg.validate();

  const StudyResult result = run_study(cfg);
  for (const auto& r : result.raw) {
    if (r.converged) continue;
    err << "warning: replication " << r.rep_index << " (" << to_string(r.scenario) << ", n "
        << r.n << ", " << to_string(r.penalty) << ", " << to_string(r.selector)
        << ") failed and is excluded\n";
  }
  std::ofstream raw = open_output(a.output + "_raw.csv");
  write_raw_dump(raw, result.raw);
  std::ofstream summary = open_output(a.output + "_summary.csv");
  write_summary(summary, result.summary);
  print_tables(out, result.summary);
  return 0;
}

int cmd_graph(const GraphArgs& a, std::ostream& out) {
  require(a.input, "--input");
  const SymMatrix omega = read_matrix(a.input);
  if (a.output.empty()) {
    write_dot(out, omega);
  } else {
    std::ofstream file = open_output(a.output);
    write_dot(file, omega);
  }
  return 0;
}

}  // namespace

unsigned long long default_seed() {
  const char* env = std::getenv("PENPREC_SEED");
  if (env == nullptr || *env == '\0') return kBuiltinSeed;
  std::string_view text(env);
  unsigned long long seed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("PENPREC_SEED is not an unsigned integer: " + std::string(text));
  }
  return seed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penalized sparse precision-matrix estimation", "penprec"};
  app.require_subcommand(1);

  EstimateArgs est;
  PathArgs path;
  SimulateArgs sim;
  GraphArgs graph;

  try {
    est.seed = path.seed = sim.seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  auto* e = app.add_subcommand("estimate", "Fit one precision matrix and select lambda");
  e->add_option("--config", est.config, "key = value file; flags take precedence");
  e->add_option("-i,--input", est.input, "Data table, observations in rows");
  e->add_option("-o,--output", est.output, "Output prefix");
  e->add_flag("--center", est.center, "Subtract column means");
  e->add_option("--selector", est.selector, "loocv, kcv, gacv, bic or aic");
  e->add_option("--lambda", est.lambda, "Fit at this lambda and skip selection");
  e->add_option("--seed", est.seed, "Seed for the fold split");
  add_penalty_options(e, est.fit);
  add_grid_options(e, est.fit);
  add_solver_options(e, est.fit.solver);

  auto* pth = app.add_subcommand("path", "Score every lambda under all selectors");
  pth->add_option("--config", path.config, "key = value file; flags take precedence");
  pth->add_option("-i,--input", path.input, "Data table, observations in rows");
  pth->add_option("-o,--output", path.output, "Output CSV (default: stdout)");
  pth->add_flag("--center", path.center, "Subtract column means");
  pth->add_option("--seed", path.seed, "Seed for the fold split");
  add_penalty_options(pth, path.fit);
  add_grid_options(pth, path.fit);
  add_solver_options(pth, path.fit.solver);

  auto* s = app.add_subcommand("simulate", "Run a Monte-Carlo study");
  s->add_option("--config", sim.config, "key = value file; flags take precedence");
  s->add_option("-o,--output", sim.output, "Output prefix for the raw dump and summary");
  s->add_option("--scenarios", sim.scenarios, "tridiagonal, dense, sparse")->delimiter(',');
  s->add_option("--p", sim.p, "Dimension")->check(CLI::Range(std::size_t{2}, std::size_t{500}));
  s->add_option("--zero-prob", sim.zero_prob, "Zero probability for the sparse scenario")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--n", sim.n_values, "Sample sizes")->delimiter(',');
  s->add_option("--penalties", sim.penalties, "lasso, adaptive, scad")->delimiter(',');
  s->add_option("--selectors", sim.selectors, "loocv, kcv, gacv, bic, aic")->delimiter(',');
  s->add_option("--reps", sim.reps, "Replications per cell");
  s->add_option("--jobs", sim.jobs, "Worker threads")->check(CLI::PositiveNumber);
  s->add_flag("--fixed-sparse", sim.fixed_sparse, "Draw the sparse truth once per study");
  s->add_option("--seed", sim.seed, "Root seed");
  add_penalty_options(s, sim.fit);
  add_grid_options(s, sim.fit);
  add_solver_options(s, sim.fit.solver);

  auto* g = app.add_subcommand("graph", "Write an estimate as a DOT graph");
  g->add_option("--config", graph.config, "key = value file; flags take precedence");
  g->add_option("-i,--input", graph.input, "Omega CSV written by estimate");
  g->add_option("-o,--output", graph.output, "DOT file (default: stdout)");

  std::vector<const char*> argv{"penprec"};
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (e->parsed()) {
      merge_config(e, est.config);
      return cmd_estimate(est, out, err);
    }
    if (pth->parsed()) {
      merge_config(pth, path.config);
      return cmd_path(path, out);
    }
    if (s->parsed()) {
      merge_config(s, sim.config);
      return cmd_simulate(sim, out, err);
    }
    merge_config(g, graph.config);
    return cmd_graph(graph, out);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? 0 : 1;
  } catch (const CLI::Error& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return 2;
  } catch (const ParseError& ex) {
    err << "parse error";
    if (ex.line() > 0) err << " at line " << ex.line();
    err << ": " << ex.what() << '\n';
    return 1;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
}

}  // namespace penprec::cli
