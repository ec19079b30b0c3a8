#ifndef AIRES_COMMANDS_HPP
#define AIRES_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aires/config.hpp"
#include "aires/gcn.hpp"
#include "aires/matrix_market.hpp"
#include "aires/scheduler.hpp"
#include "aires/serialize.hpp"
#include "aires/synth.hpp"

namespace aires {

struct ExperimentConfig {
  std::string a_path;
  std::string b_path;            // multiply / bench-merge; empty means B = A
  std::string h_path;            // gcn feature matrix; empty means generated
  std::string w_path;            // gcn weight matrix
  index_t gen_weight_dim = 0;    // gcn: generate (in x this) weights when > 0
  std::string strategy = "all";  // aires | maxmemory | all
  std::vector<std::uint64_t> budgets;  // empty means { sim.device_bytes }
  SimConfig sim;
  std::uint64_t seed = 1;
  std::vector<index_t> feature_dims;  // gcn sweep; empty means { 256 }
  double feature_sparsity = 99.0;
  std::string out_dir = ".";
};

namespace detail {

inline std::vector<Strategy> parse_strategies(const std::string& name) {
  if (name == "aires") return {Strategy::aires};
  if (name == "maxmemory") return {Strategy::maxmemory};
  if (name == "all") return {Strategy::aires, Strategy::maxmemory};
  throw std::invalid_argument("unknown strategy '" + name + "' (aires|maxmemory|all)");
}

inline CsrMatrix load_any(const std::string& path) {
  if (path.ends_with(".mtx")) return load_matrix_market(path);
  return read_matrix_file(path);
}

inline std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline std::string summary_line(const CsrMatrix& a, ElementSizes s = {}) {
  return "rows=" + std::to_string(a.n_rows) + " cols=" + std::to_string(a.n_cols) +
         " nnz=" + std::to_string(a.nnz()) + " bytes=" + std::to_string(byte_size(a, s));
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  out << body;
  if (!out) fail(errc::io_error, "short write to " + path);
}

inline void write_trace_file(const std::string& path, const std::vector<TraceEvent>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  write_trace_csv(out, trace);
}

struct SweepCell {
  RunReport report;
  CsrMatrix c;
  std::vector<TraceEvent> trace;
  bool ok = false;
};

inline SweepCell run_cell(Strategy st, const CsrMatrix& a, const CscMatrix& b,
                          std::uint64_t bytes, const SimConfig& sim) {
  SweepCell cell;
  MemoryBudget budget{bytes, sim.host_bytes, sim.sizes};
  try {
    RunResult r = run_strategy(st, a, b, budget, sim);
    cell.report = r.report;
    cell.c = std::move(r.c);
    cell.trace = std::move(r.trace);
    cell.ok = true;
  } catch (const error& e) {
    if (e.code() != errc::insufficient_device_memory && e.code() != errc::row_too_large)
      throw;
    cell.report.strategy = st;
    cell.report.budget_bytes = bytes;
    cell.report.oom = true;
  }
  return cell;
}

}  // namespace detail

inline std::string cmd_convert(const std::string& in_path, const std::string& out_path) {
  CsrMatrix a = load_matrix_market(in_path);
  write_matrix_file(out_path, a);
  return detail::summary_line(a);
}

inline std::string cmd_gen(index_t n, double density, std::uint64_t seed,
                           const std::string& out_path) {
  CsrMatrix a = gen_symmetric(n, density, seed);
  write_matrix_file(out_path, a);
  return detail::summary_line(a);
}

/// Budget x strategy sweep over A*B. Cells run in parallel, each with its own
/// simulator; rows land in (budget, strategy) submission order. Writes
/// report.csv, per-cell traces, and c.bin from the first completed cell.
/// Returns 3 when no cell completes, 0 otherwise.
inline int cmd_multiply(const ExperimentConfig& cfg, std::ostream& log) {
  CsrMatrix a = detail::load_any(cfg.a_path);
  CsrMatrix b_csr = cfg.b_path.empty() ? a : detail::load_any(cfg.b_path);
  CscMatrix b = csr_to_csc(b_csr);
  std::vector<Strategy> strategies = detail::parse_strategies(cfg.strategy);
  std::vector<std::uint64_t> budgets =
      cfg.budgets.empty() ? std::vector<std::uint64_t>{cfg.sim.device_bytes} : cfg.budgets;

  std::vector<std::future<detail::SweepCell>> cells;
  for (std::uint64_t bytes : budgets)
    for (Strategy st : strategies)
      cells.push_back(std::async(std::launch::async, detail::run_cell, st, std::cref(a),
                                 std::cref(b), bytes, std::cref(cfg.sim)));

  std::vector<RunReport> rows;
  CsrMatrix c;
  bool have_c = false;
  for (auto& fut : cells) {
    detail::SweepCell cell = fut.get();
    rows.push_back(cell.report);
    if (cell.ok) {
      std::string name = "trace_" + std::string(strategy_name(cell.report.strategy)) + "_" +
                         std::to_string(cell.report.budget_bytes) + ".csv";
      detail::write_trace_file(detail::join(cfg.out_dir, name), cell.trace);
      if (!have_c) {
        c = std::move(cell.c);
        have_c = true;
      }
    }
  }

  std::ofstream report(detail::join(cfg.out_dir, "report.csv"), std::ios::binary);
  if (!report) fail(errc::io_error, "cannot open report.csv in " + cfg.out_dir);
  write_reports_csv(report, rows);
  if (have_c) write_matrix_file(detail::join(cfg.out_dir, "c.bin"), c);

  std::uint64_t oom_rows = 0;
  for (const RunReport& r : rows) oom_rows += r.oom ? 1 : 0;
  log << "report.csv: " << rows.size() << " rows, " << oom_rows << " oom\n";
  if (have_c) log << "c.bin: " << detail::summary_line(c, cfg.sim.sizes) << "\n";
  return have_c ? 0 : 3;
}

/// Forward GCN layer over a feature-dimension sweep. H is loaded when a path
/// is given (single row) or generated per dimension otherwise; W is loaded or
/// generated per --gen-weights. Writes gcn_report.csv plus h_next_<dim>.bin;
/// cells that run out of device memory become oom rows. Returns 3 when no
/// cell completes, 0 otherwise.
inline int cmd_gcn(const ExperimentConfig& cfg, std::ostream& log) {
  CsrMatrix a = detail::load_any(cfg.a_path);
  if (cfg.w_path.empty() && cfg.gen_weight_dim == 0)
    throw std::invalid_argument("a weight matrix is required: pass --weights or --gen-weights");
  std::vector<Strategy> strategies = detail::parse_strategies(cfg.strategy);
  std::vector<std::uint64_t> budgets =
      cfg.budgets.empty() ? std::vector<std::uint64_t>{cfg.sim.device_bytes} : cfg.budgets;
  MemoryBudget budget{budgets.front(), cfg.sim.host_bytes, cfg.sim.sizes};

  std::vector<index_t> dims = cfg.feature_dims.empty() ? std::vector<index_t>{256}
                                                       : cfg.feature_dims;
  CsrMatrix h_loaded;
  if (!cfg.h_path.empty()) {
    h_loaded = detail::load_any(cfg.h_path);
    dims = {h_loaded.n_cols};
  }

  std::ostringstream csv;
  csv << "feature_dim," << kReportCsvHeader << '\n';
  bool any_ok = false;
  for (index_t dim : dims) {
    CsrMatrix h = cfg.h_path.empty() ? gen_features(a.n_rows, dim, cfg.feature_sparsity, cfg.seed)
                                     : h_loaded;
    GcnLayerSpec spec;
    spec.feature_dim = dim;
    spec.feature_sparsity_pct = cfg.feature_sparsity;
    spec.weight = cfg.w_path.empty() ? gen_weights(dim, cfg.gen_weight_dim, cfg.seed + 1)
                                     : read_weights_file(cfg.w_path);
    CscMatrix h_csc = csr_to_csc(h);
    bool wrote_h_next = false;
    for (Strategy st : strategies) {
      LayerResult lr;
      try {
        lr = layer_forward(a, h_csc, spec, st, budget, cfg.sim);
      } catch (const error& e) {
        if (e.code() != errc::insufficient_device_memory && e.code() != errc::row_too_large)
          throw;
        RunReport oom;
        oom.strategy = st;
        oom.budget_bytes = budget.device_total;
        oom.oom = true;
        csv << dim << ',' << report_csv_row(oom) << '\n';
        continue;
      }
      any_ok = true;
      csv << dim << ',' << report_csv_row(lr.aggregate_report) << '\n';
      std::string trace_name = "trace_gcn_" + std::string(strategy_name(st)) + "_" +
                               std::to_string(dim) + ".csv";
      detail::write_trace_file(detail::join(cfg.out_dir, trace_name), lr.trace);
      if (!wrote_h_next) {
        write_matrix_file(detail::join(cfg.out_dir, "h_next_" + std::to_string(dim) + ".bin"),
                          lr.h_next);
        log << "h_next_" << dim << ".bin: " << detail::summary_line(lr.h_next, cfg.sim.sizes)
            << "\n";
        wrote_h_next = true;
      }
    }
  }
  detail::write_text_file(detail::join(cfg.out_dir, "gcn_report.csv"), csv.str());
  log << "gcn_report.csv: " << dims.size() * strategies.size() << " rows\n";
  return any_ok ? 0 : 3;
}

/// Per-budget merging overhead of the byte-granular baseline next to the
/// aligned scheduler. Share is merge seconds over total simulated seconds.
inline int cmd_bench_merge_overhead(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.budgets.empty())
    throw std::invalid_argument("bench-merge needs an explicit budget list (--budget)");
  CsrMatrix a = detail::load_any(cfg.a_path);
  CsrMatrix b_csr = cfg.b_path.empty() ? a : detail::load_any(cfg.b_path);
  CscMatrix b = csr_to_csc(b_csr);

  std::ostringstream csv;
  csv << "budget_bytes,maxmemory_merge_bytes,maxmemory_merge_share,maxmemory_oom,"
         "aires_merge_bytes\n";
  char buf[160];
  for (std::uint64_t bytes : cfg.budgets) {
    detail::SweepCell mm = detail::run_cell(Strategy::maxmemory, a, b, bytes, cfg.sim);
    detail::SweepCell ar = detail::run_cell(Strategy::aires, a, b, bytes, cfg.sim);
    double share = mm.ok && mm.report.total_s > 0.0 ? mm.report.merge_seconds / mm.report.total_s
                                                    : 0.0;
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.9e,%d,%llu\n",
                  static_cast<unsigned long long>(bytes),
                  static_cast<unsigned long long>(mm.report.ledger.merge_bytes), share,
                  mm.report.oom ? 1 : 0,
                  static_cast<unsigned long long>(ar.report.ledger.merge_bytes));
    csv << buf;
  }
  detail::write_text_file(detail::join(cfg.out_dir, "merge_bench.csv"), csv.str());
  log << "merge_bench.csv: " << cfg.budgets.size() << " budgets\n";
  return 0;
}

}  // namespace aires

#endif  // AIRES_COMMANDS_HPP
