#ifndef AIRES_SCHEDULER_HPP
#define AIRES_SCHEDULER_HPP

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "aires/config.hpp"
#include "aires/memory_model.hpp"
#include "aires/partition.hpp"
#include "aires/serialize.hpp"
#include "aires/spgemm.hpp"
#include "aires/tiered_sim.hpp"

namespace aires {

enum class Strategy { aires, maxmemory };

inline const char* strategy_name(Strategy s) {
  return s == Strategy::aires ? "aires" : "maxmemory";
}

struct RunReport {
  Strategy strategy = Strategy::aires;
  std::uint64_t budget_bytes = 0;
  double total_s = 0.0;
  double phase1_s = 0.0;
  double phase2_s = 0.0;
  double phase3_s = 0.0;
  IoLedger ledger;
  std::uint64_t c_checksum = 0;
  index_t segments = 0;
  bool oom = false;
  double merge_seconds = 0.0;  // fragment return + host stitch + re-send share
};

struct RunResult {
  CsrMatrix c;
  RunReport report;
  std::vector<TraceEvent> trace;
};

namespace detail {

inline std::string seg_buffer(index_t i) { return "a_seg_" + std::to_string(i); }
inline std::string tile_buffer(index_t i) { return "a_tile_" + std::to_string(i); }

/// Byte contribution of one C block to the final CSR arrays. The base
/// pointer entry is charged once, on the first block of the run.
inline std::uint64_t block_delta(const CsrBlockResult& block, bool first,
                                 ElementSizes s) {
  return (block.fragment.n_rows + (first ? 1 : 0)) * s.index_bytes +
         block.fragment.nnz() * (s.index_bytes + s.value_bytes);
}

inline CsrMatrix empty_product(index_t n_rows, index_t n_cols) {
  CsrMatrix c;
  c.n_rows = n_rows;
  c.n_cols = n_cols;
  c.row_ptr.assign(n_rows + 1, 0);
  return c;
}

}  // namespace detail

/// Three-phase run: dual-way loads (B direct to device, A to host), then
/// segment-wise compute with the device C allocation grown by exact block
/// sizes, then the result drain. The device C is drained to the host early
/// whenever the next segment or block would not fit.
inline RunResult run_aires(const CsrMatrix& a, const CscMatrix& b,
                           const MemoryBudget& budget, const SimConfig& cfg) {
  if (a.n_cols != b.n_rows)
    fail(errc::dimension_mismatch, "inner dimensions " + std::to_string(a.n_cols) +
                                       " and " + std::to_string(b.n_rows) + " differ");
  ElementSizes s = budget.element_sizes;
  MatrixStats a_stats = stats_of(a, s), b_stats = stats_of(b, s);
  std::uint64_t m_c = estimate_output_memory(a_stats, b_stats);
  std::uint64_t m_b = estimate_b_memory(b_stats);
  BlockBudget bb = block_budget(budget, m_c, m_b);
  std::vector<RobwSegment> segs = robw_partition(a, 3 * bb.p, s);

  TieredSystem sys(cfg, budget.device_total, budget.host_total);
  std::uint64_t device_cap = budget.device_total;
  std::uint64_t a_bytes = byte_size(a, s), b_bytes = byte_size(b, s);

  // Phase I: dual-way load, then host-side partitioning.
  sys.set_phase(Phase::one);
  sys.alloc(TierId::storage, "A", a_bytes);
  sys.alloc(TierId::storage, "B", b_bytes);
  TransferRequest loads[2] = {
      {ChannelId::gds, TierId::storage, TierId::device, "B", b_bytes, {}},
      {ChannelId::s2h, TierId::storage, TierId::host, "A", a_bytes, {}},
  };
  sys.overlap_window(loads);
  sys.host_compute(a_bytes, "partition");
  for (const RobwSegment& seg : segs)
    sys.alloc(TierId::host, detail::seg_buffer(seg.seg_index), seg.byte_size);
  double phase1_s = sys.now();

  // Phase II: stream segments, multiply, grow C.
  sys.set_phase(Phase::two);
  sys.free_buffer(TierId::host, "A");
  std::vector<CsrBlockResult> blocks;
  blocks.reserve(segs.size());
  std::uint64_t c_device = 0;
  bool first_block = true;
  auto drain_c = [&] {
    if (c_device == 0) return;
    sys.transfer(ChannelId::d2h, TierId::device, TierId::host, "C", c_device, "C_host");
    sys.free_buffer(TierId::device, "C");
    c_device = 0;
  };
  std::string prev;
  for (const RobwSegment& seg : segs) {
    if (!prev.empty()) sys.free_buffer(TierId::device, prev);
    std::string name = detail::seg_buffer(seg.seg_index);
    if (sys.tier(TierId::device).occupancy + seg.byte_size > device_cap) drain_c();
    if (sys.tier(TierId::device).occupancy + seg.byte_size > device_cap)
      fail(errc::insufficient_device_memory,
           "segment " + std::to_string(seg.seg_index) + " cannot fit the device");
    sys.transfer(ChannelId::h2d, TierId::host, TierId::device, name, seg.byte_size);
    CsrBlockResult block = spgemm_block(seg, a.n_cols, b, cfg.col_tile);
    std::uint64_t delta = detail::block_delta(block, first_block, s);
    if (sys.tier(TierId::device).occupancy + delta > device_cap) drain_c();
    if (sys.tier(TierId::device).occupancy + delta > device_cap)
      fail(errc::insufficient_device_memory,
           "output block of segment " + std::to_string(seg.seg_index) +
               " cannot fit the device");
    sys.alloc(TierId::device, "C", delta);
    c_device += delta;
    first_block = false;
    std::string operands[3] = {name, "B", "C"};
    sys.compute(block.flops, operands, "spgemm_" + std::to_string(seg.seg_index));
    blocks.push_back(std::move(block));
    prev = name;
  }
  double phase2_s = sys.now() - phase1_s;

  // Phase III: release operands, drain C, store it.
  sys.set_phase(Phase::three);
  if (!prev.empty()) sys.free_buffer(TierId::device, prev);
  for (const RobwSegment& seg : segs)
    sys.free_buffer(TierId::host, detail::seg_buffer(seg.seg_index));
  CsrMatrix c = assemble_blocks(blocks, a.n_rows, b.n_cols);
  std::uint64_t c_bytes = byte_size(c, s);
  drain_c();
  sys.free_buffer(TierId::device, "B");
  if (!sys.has_buffer(TierId::host, "C_host"))
    sys.alloc(TierId::host, "C_host", c_bytes);
  sys.transfer(ChannelId::s2h, TierId::host, TierId::storage, "C_host", c_bytes, "C");
  double phase3_s = sys.now() - phase1_s - phase2_s;

  RunResult res;
  res.c = std::move(c);
  res.report.strategy = Strategy::aires;
  res.report.budget_bytes = budget.device_total;
  res.report.phase1_s = phase1_s;
  res.report.phase2_s = phase2_s;
  res.report.phase3_s = phase3_s;
  res.report.total_s = phase1_s + phase2_s + phase3_s;
  res.report.ledger = sys.ledger();
  res.report.c_checksum = checksum(res.c);
  res.report.segments = static_cast<index_t>(segs.size());
  res.trace = sys.trace();
  return res;
}

/// Baseline run: the device budget left after the static output reservation
/// is split equally between the A stream and B; A arrives in raw byte tiles,
/// and every mid-row cut returns a fragment to the host, is stitched onto
/// the next tile, and travels again.
inline RunResult run_maxmemory(const CsrMatrix& a, const CscMatrix& b,
                               const MemoryBudget& budget, const SimConfig& cfg) {
  if (a.n_cols != b.n_rows)
    fail(errc::dimension_mismatch, "inner dimensions " + std::to_string(a.n_cols) +
                                       " and " + std::to_string(b.n_rows) + " differ");
  ElementSizes s = budget.element_sizes;
  MatrixStats a_stats = stats_of(a, s), b_stats = stats_of(b, s);
  std::uint64_t m_c = estimate_output_memory(a_stats, b_stats);
  std::uint64_t m_b = estimate_b_memory(b_stats);
  if (budget.device_total <= m_c)
    fail(errc::insufficient_device_memory,
         "static output reservation " + std::to_string(m_c) + " exceeds device budget");
  std::uint64_t half = (budget.device_total - m_c) / 2;
  if (m_b > half)
    fail(errc::insufficient_device_memory,
         "operand " + std::to_string(m_b) + " exceeds its half share " +
             std::to_string(half));
  std::vector<RawSegment> tiles =
      stream_bytes(a, s) == 0 ? std::vector<RawSegment>{} : maxmemory_partition(a, half, s);

  TieredSystem sys(cfg, budget.device_total, budget.host_total);
  std::uint64_t device_cap = budget.device_total;
  std::uint64_t a_bytes = byte_size(a, s), b_bytes = byte_size(b, s);
  double merge_seconds = 0.0;

  // Phase I: stage everything through the host, reserve C statically.
  sys.set_phase(Phase::one);
  sys.alloc(TierId::storage, "A", a_bytes);
  sys.alloc(TierId::storage, "B", b_bytes);
  sys.transfer(ChannelId::s2h, TierId::storage, TierId::host, "A", a_bytes);
  sys.transfer(ChannelId::s2h, TierId::storage, TierId::host, "B", b_bytes);
  sys.transfer(ChannelId::h2d, TierId::host, TierId::device, "B", b_bytes);
  sys.host_compute(a_bytes, "staging");
  if (m_c > 0) sys.alloc(TierId::device, "C", m_c);
  double phase1_s = sys.now();

  // Phase II: stream raw tiles, stitch fragments, fill the reservation.
  sys.set_phase(Phase::two);
  std::vector<CsrBlockResult> blocks;
  blocks.reserve(tiles.size());
  std::uint64_t c_used = 0;
  bool first_block = true;
  auto drain_c = [&] {
    if (c_used == 0) return;
    sys.transfer(ChannelId::d2h, TierId::device, TierId::host, "C", c_used, "C_host");
    c_used = 0;
  };
  StreamFragment pending{0, 0};
  std::string prev;
  for (const RawSegment& tile : tiles) {
    RawSegment seg = tile;
    if (!pending.empty()) {
      seg = merge_partial(pending, tile, a, sys.ledger().merge_bytes, s);
      merge_seconds += sys.host_compute(pending.size(), "merge");
      merge_seconds += static_cast<double>(pending.size()) / cfg.h2d.bandwidth;
      sys.free_buffer(TierId::host, "frag");
    }
    if (!prev.empty()) sys.free_buffer(TierId::device, prev);
    std::string name = detail::tile_buffer(seg.seg_index);
    std::uint64_t tb = segment_transfer_bytes(seg, s);
    if (sys.tier(TierId::device).occupancy + tb > device_cap)
      fail(errc::insufficient_device_memory,
           "tile " + std::to_string(seg.seg_index) + " cannot fit the device");
    sys.transfer(ChannelId::h2d, TierId::host, TierId::device, "A", tb, name);
    CsrBlockResult block =
        spgemm_block(slice_rows(a, seg.begin_row, seg.end_row, seg.seg_index, s),
                     a.n_cols, b, cfg.col_tile);
    std::uint64_t delta = detail::block_delta(block, first_block, s);
    if (c_used + delta > m_c) drain_c();
    if (c_used + delta > m_c)
      fail(errc::insufficient_device_memory,
           "output block of tile " + std::to_string(seg.seg_index) +
               " exceeds the static reservation");
    c_used += delta;
    first_block = false;
    std::string operands[3] = {name, "B", "C"};
    sys.compute(block.flops, operands, "spgemm_" + std::to_string(seg.seg_index));
    blocks.push_back(std::move(block));
    if (!seg.trailing_partial.empty()) {
      merge_seconds += sys.transfer(ChannelId::d2h, TierId::device, TierId::host, name,
                                    seg.trailing_partial.size(), "frag");
      pending = seg.trailing_partial;
    } else {
      pending = StreamFragment{0, 0};
    }
    prev = name;
  }
  double phase2_s = sys.now() - phase1_s;

  // Phase III: drain the reservation, store C.
  sys.set_phase(Phase::three);
  if (!prev.empty()) sys.free_buffer(TierId::device, prev);
  sys.free_buffer(TierId::host, "A");
  CsrMatrix c = blocks.empty() ? detail::empty_product(a.n_rows, b.n_cols)
                               : assemble_blocks(blocks, a.n_rows, b.n_cols);
  std::uint64_t c_bytes = byte_size(c, s);
  drain_c();
  if (m_c > 0) sys.free_buffer(TierId::device, "C");
  sys.free_buffer(TierId::device, "B");
  sys.free_buffer(TierId::host, "B");
  if (!sys.has_buffer(TierId::host, "C_host"))
    sys.alloc(TierId::host, "C_host", c_bytes);
  sys.transfer(ChannelId::s2h, TierId::host, TierId::storage, "C_host", c_bytes, "C");
  double phase3_s = sys.now() - phase1_s - phase2_s;

  RunResult res;
  res.c = std::move(c);
  res.report.strategy = Strategy::maxmemory;
  res.report.budget_bytes = budget.device_total;
  res.report.phase1_s = phase1_s;
  res.report.phase2_s = phase2_s;
  res.report.phase3_s = phase3_s;
  res.report.total_s = phase1_s + phase2_s + phase3_s;
  res.report.ledger = sys.ledger();
  res.report.c_checksum = checksum(res.c);
  res.report.segments = static_cast<index_t>(tiles.size());
  res.report.merge_seconds = merge_seconds;
  res.trace = sys.trace();
  return res;
}

inline RunResult run_strategy(Strategy st, const CsrMatrix& a, const CscMatrix& b,
                              const MemoryBudget& budget, const SimConfig& cfg) {
  return st == Strategy::aires ? run_aires(a, b, budget, cfg)
                               : run_maxmemory(a, b, budget, cfg);
}

/// Runs both strategies over a budget list. Out-of-memory outcomes are
/// recorded as flagged rows, not raised.
inline std::vector<RunReport> compare_strategies(const CsrMatrix& a, const CscMatrix& b,
                                                 const std::vector<std::uint64_t>& budgets,
                                                 const SimConfig& cfg) {
  std::vector<RunReport> rows;
  for (std::uint64_t bytes : budgets) {
    for (Strategy st : {Strategy::aires, Strategy::maxmemory}) {
      MemoryBudget budget{bytes, cfg.host_bytes, cfg.sizes};
      try {
        rows.push_back(run_strategy(st, a, b, budget, cfg).report);
      } catch (const error& e) {
        if (e.code() != errc::insufficient_device_memory && e.code() != errc::row_too_large)
          throw;
        RunReport r;
        r.strategy = st;
        r.budget_bytes = bytes;
        r.oom = true;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

inline constexpr const char* kReportCsvHeader =
    "strategy,budget_bytes,total_s,phase1_s,phase2_s,phase3_s,gds_bytes,s2h_bytes,"
    "h2d_bytes,d2h_bytes,merge_bytes,segments,oom,c_checksum";

inline std::string report_csv_row(const RunReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%llu,%.9e,%.9e,%.9e,%.9e,%llu,%llu,%llu,%llu,%llu,%llu,%d,%llu",
                strategy_name(r.strategy),
                static_cast<unsigned long long>(r.budget_bytes), r.total_s, r.phase1_s,
                r.phase2_s, r.phase3_s,
                static_cast<unsigned long long>(r.ledger.gds.bytes),
                static_cast<unsigned long long>(r.ledger.s2h.bytes),
                static_cast<unsigned long long>(r.ledger.h2d.bytes),
                static_cast<unsigned long long>(r.ledger.d2h.bytes),
                static_cast<unsigned long long>(r.ledger.merge_bytes),
                static_cast<unsigned long long>(r.segments), r.oom ? 1 : 0,
                static_cast<unsigned long long>(r.c_checksum));
  return buf;
}

inline void write_reports_csv(std::ostream& out, const std::vector<RunReport>& rows) {
  out << kReportCsvHeader << '\n';
  for (const RunReport& r : rows) out << report_csv_row(r) << '\n';
}

}  // namespace aires

#endif  // AIRES_SCHEDULER_HPP
