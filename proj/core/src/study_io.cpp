#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "penprec/simulation.hpp"

namespace penprec {
namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_cell(const MeasureStats& m) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << m.mean << " (" << m.sd << ")";
  return os.str();
}

}  // namespace

void write_raw_dump(std::ostream& out, const std::vector<ReplicationResult>& raw) {
  out << "rep_index,scenario,n,penalty,selector,chosen_lambda,frobenius,frobenius_squared,"
         "entropy,fp,fn,converged_flag,data_hash\n";
  for (const auto& r : raw) {
    out << r.rep_index << ',' << to_string(r.scenario) << ',' << r.n << ','
        << to_string(r.penalty) << ',' << to_string(r.selector) << ',' << fmt17(r.chosen_lambda)
        << ',' << fmt17(r.frobenius) << ',' << fmt17(r.frobenius_squared) << ','
        << fmt17(r.entropy) << ',' << r.fp << ',' << r.fn << ',' << (r.converged ? 1 : 0) << ','
        << std::hex << std::setw(16) << std::setfill('0') << r.data_hash << std::dec
        << std::setfill(' ') << '\n';
  }
}

void write_summary(std::ostream& out, const StudySummary& summary) {
  out << "scenario,p,n,penalty,selector,count,failed,lambda_mean,lambda_sd,frobenius_mean,"
         "frobenius_sd,frobenius_squared_mean,frobenius_squared_sd,entropy_mean,entropy_sd,"
         "fp_mean,fp_sd,fn_mean,fn_sd,recovery_rate\n";
  for (const auto& c : summary.cells) {
    out << to_string(c.scenario) << ',' << c.p << ',' << c.n << ',' << to_string(c.penalty) << ','
        << to_string(c.selector) << ',' << c.count << ',' << c.failed;
    for (const MeasureStats* m :
         {&c.lambda, &c.frobenius, &c.frobenius_squared, &c.entropy, &c.fp, &c.fn}) {
      out << ',' << fmt17(m->mean) << ',' << fmt17(m->sd);
    }
    out << ',' << fmt17(c.recovery_rate) << '\n';
  }
}

void print_tables(std::ostream& out, const StudySummary& summary) {
  using Block = std::tuple<ScenarioKind, std::size_t, std::size_t, PenaltyKind>;
  std::vector<Block> order;
  std::map<Block, std::vector<const CellSummary*>> blocks;
  for (const auto& c : summary.cells) {
    Block key{c.scenario, c.p, c.n, c.penalty};
    auto [it, inserted] = blocks.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&c);
  }

  constexpr int kLabel = 14;
  constexpr int kColumn = 22;
  for (const Block& key : order) {
    const auto& cells = blocks.at(key);
    out << to_string(std::get<0>(key)) << "  p=" << std::get<1>(key) << "  n=" << std::get<2>(key)
        << "  penalty=" << to_string(std::get<3>(key)) << '\n';
    out << std::left << std::setw(kLabel) << "";
    for (const CellSummary* c : cells) out << std::setw(kColumn) << to_string(c->selector);
    out << '\n';
    const std::pair<const char*, MeasureStats CellSummary::*> rows[] = {
        {"Frobenius", &CellSummary::frobenius},   {"Frobenius^2", &CellSummary::frobenius_squared},
        {"Entropy", &CellSummary::entropy},       {"FP", &CellSummary::fp},
        {"FN", &CellSummary::fn},                 {"lambda", &CellSummary::lambda}};
    for (const auto& [label, member] : rows) {
      out << std::setw(kLabel) << label;
      for (const CellSummary* c : cells) out << std::setw(kColumn) << fmt_cell(c->*member);
      out << '\n';
    }
    out << std::setw(kLabel) << "reps (failed)";
    for (const CellSummary* c : cells) {
      out << std::setw(kColumn) << (std::to_string(c->count) + " (" + std::to_string(c->failed) + ")");
    }
    out << std::right << "\n\n";
  }
}

}  // namespace penprec
