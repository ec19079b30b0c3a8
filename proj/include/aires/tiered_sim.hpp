#ifndef AIRES_TIERED_SIM_HPP
#define AIRES_TIERED_SIM_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aires/config.hpp"
#include "aires/error.hpp"

namespace aires {

enum class TierId { device, host, storage };
enum class ChannelId { gds, s2h, h2d, d2h };
enum class EventKind { transfer, compute, alloc, free_buffer };
enum class Phase { one, two, three };

inline const char* tier_name(TierId t) {
  switch (t) {
    case TierId::device: return "device";
    case TierId::host: return "host";
    default: return "storage";
  }
}

inline const char* channel_name(ChannelId c) {
  switch (c) {
    case ChannelId::gds: return "gds";
    case ChannelId::s2h: return "s2h";
    case ChannelId::h2d: return "h2d";
    default: return "d2h";
  }
}

inline const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::transfer: return "transfer";
    case EventKind::compute: return "compute";
    case EventKind::alloc: return "alloc";
    default: return "free";
  }
}

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::one: return "I";
    case Phase::two: return "II";
    default: return "III";
  }
}

/// One simulated event. `where` is a channel name for transfers and a tier
/// name otherwise. Compute on the device reports flops; compute on the host
/// reports touched bytes.
struct TraceEvent {
  double timestamp = 0.0;  // completion time, seconds
  EventKind kind = EventKind::alloc;
  Phase phase = Phase::one;
  std::string where;
  std::string buffer;
  std::uint64_t bytes = 0;
  std::uint64_t flops = 0;
};

struct ChannelTotals {
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;
  double seconds = 0.0;

  bool operator==(const ChannelTotals&) const = default;
};

struct IoLedger {
  ChannelTotals gds, s2h, h2d, d2h;
  std::uint64_t merge_bytes = 0;
  std::uint64_t peak_device_occupancy = 0;

  ChannelTotals& channel(ChannelId c) {
    switch (c) {
      case ChannelId::gds: return gds;
      case ChannelId::s2h: return s2h;
      case ChannelId::h2d: return h2d;
      default: return d2h;
    }
  }
  const ChannelTotals& channel(ChannelId c) const {
    return const_cast<IoLedger*>(this)->channel(c);
  }

  std::uint64_t host_device_bytes() const { return h2d.bytes + d2h.bytes; }

  bool operator==(const IoLedger&) const = default;
};

struct Tier {
  TierId id = TierId::storage;
  std::uint64_t capacity = 0;  // 0 means unbounded
  std::uint64_t occupancy = 0;
  std::map<std::string, std::uint64_t> resident;
};

struct TransferRequest {
  ChannelId channel;
  TierId src;
  TierId dst;
  std::string src_buffer;
  std::uint64_t bytes = 0;
  std::string dst_buffer;  // defaults to src_buffer when empty
};

/// Virtual-clock simulator of a device/host/storage hierarchy joined by four
/// channels. Transfers copy bytes (the source keeps its buffer; the
/// destination entry is created or grown). All timing is deterministic.
class TieredSystem {
 public:
  explicit TieredSystem(const SimConfig& cfg, std::uint64_t device_capacity = 0,
                        std::uint64_t host_capacity = 0)
      : cfg_(cfg) {
    device_.id = TierId::device;
    device_.capacity = device_capacity ? device_capacity : cfg.device_bytes;
    host_.id = TierId::host;
    host_.capacity = host_capacity ? host_capacity : cfg.host_bytes;
    storage_.id = TierId::storage;
    storage_.capacity = 0;  // unbounded
  }

  const SimConfig& config() const { return cfg_; }
  double now() const { return clock_; }
  Phase phase() const { return phase_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const IoLedger& ledger() const { return ledger_; }
  IoLedger& ledger() { return ledger_; }

  Tier& tier(TierId t) {
    switch (t) {
      case TierId::device: return device_;
      case TierId::host: return host_;
      default: return storage_;
    }
  }
  const Tier& tier(TierId t) const { return const_cast<TieredSystem*>(this)->tier(t); }

  bool has_buffer(TierId t, const std::string& name) const {
    return tier(t).resident.count(name) > 0;
  }

  std::uint64_t buffer_size(TierId t, const std::string& name) const {
    auto it = tier(t).resident.find(name);
    return it == tier(t).resident.end() ? 0 : it->second;
  }

  void set_phase(Phase p) {
    if (static_cast<int>(p) < static_cast<int>(phase_))
      fail(errc::config_error, "phase labels must not decrease");
    phase_ = p;
  }

  /// Creates or grows a buffer entry; emits an alloc event.
  void alloc(TierId t, const std::string& name, std::uint64_t bytes) {
    Tier& tr = tier(t);
    if (tr.capacity && tr.occupancy + bytes > tr.capacity)
      fail(errc::capacity_exceeded,
           std::string(tier_name(t)) + " tier: " + std::to_string(tr.occupancy) + " + " +
               std::to_string(bytes) + " exceeds capacity " + std::to_string(tr.capacity));
    tr.resident[name] += bytes;
    tr.occupancy += bytes;
    if (t == TierId::device)
      ledger_.peak_device_occupancy = std::max(ledger_.peak_device_occupancy, tr.occupancy);
    push(EventKind::alloc, tier_name(t), name, bytes, 0);
  }

  /// Removes a whole buffer; emits a free event carrying the freed size.
  void free_buffer(TierId t, const std::string& name) {
    Tier& tr = tier(t);
    auto it = tr.resident.find(name);
    if (it == tr.resident.end())
      fail(errc::buffer_not_resident,
           name + " not resident on " + tier_name(t) + " tier");
    std::uint64_t bytes = it->second;
    tr.occupancy -= bytes;
    tr.resident.erase(it);
    push(EventKind::free_buffer, tier_name(t), name, bytes, 0);
  }

  /// Copies bytes across a channel; returns the simulated duration. gds and
  /// s2h run either direction between their endpoint tiers; h2d and d2h are
  /// one-way.
  double transfer(ChannelId ch, TierId src, TierId dst, const std::string& src_buffer,
                  std::uint64_t bytes, std::string dst_buffer = {}) {
    double dur = duration(ch, bytes);
    begin_transfer(ch, src, src_buffer, bytes);
    clock_ += dur;
    finish_transfer(ch, src, dst, src_buffer, bytes,
                    dst_buffer.empty() ? src_buffer : dst_buffer, dur);
    return dur;
  }

  /// Issues a set of transfers in one window. With overlap enabled the
  /// window lasts as long as the slowest transfer; otherwise the transfers
  /// run back to back. Two requests may not share a channel.
  double overlap_window(std::span<const TransferRequest> reqs) {
    for (std::size_t i = 0; i < reqs.size(); i++)
      for (std::size_t j = i + 1; j < reqs.size(); j++)
        if (reqs[i].channel == reqs[j].channel)
          fail(errc::same_channel_conflict,
               std::string("two transfers share channel ") +
                   channel_name(reqs[i].channel));
    if (!cfg_.overlap) {
      double sum = 0.0;
      for (const TransferRequest& r : reqs)
        sum += transfer(r.channel, r.src, r.dst, r.src_buffer, r.bytes, r.dst_buffer);
      return sum;
    }
    double t0 = clock_;
    std::vector<std::size_t> order(reqs.size());
    for (std::size_t i = 0; i < order.size(); i++) order[i] = i;
    std::vector<double> dur(reqs.size());
    for (std::size_t i = 0; i < reqs.size(); i++) {
      dur[i] = duration(reqs[i].channel, reqs[i].bytes);
      begin_transfer(reqs[i].channel, reqs[i].src, reqs[i].src_buffer, reqs[i].bytes);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dur[a] < dur[b]; });
    double elapsed = 0.0;
    for (std::size_t i : order) {
      const TransferRequest& r = reqs[i];
      clock_ = t0 + dur[i];
      elapsed = std::max(elapsed, dur[i]);
      finish_transfer(r.channel, r.src, r.dst, r.src_buffer, r.bytes,
                      r.dst_buffer.empty() ? r.src_buffer : r.dst_buffer, dur[i]);
    }
    clock_ = t0 + elapsed;
    return elapsed;
  }

  /// Device multiply-accumulate work; all operands must be device-resident.
  double compute(std::uint64_t flops, std::span<const std::string> operands,
                 const std::string& label) {
    for (const std::string& op : operands)
      if (!has_buffer(TierId::device, op))
        fail(errc::operand_not_on_device, op + " is not on the device");
    double dur = static_cast<double>(flops) * cfg_.flop_time;
    clock_ += dur;
    push(EventKind::compute, tier_name(TierId::device), label, 0, flops);
    return dur;
  }

  /// Host-side byte-proportional work (partitioning, staging, merging).
  double host_compute(std::uint64_t bytes, const std::string& label) {
    double dur = static_cast<double>(bytes) * cfg_.host_byte_time;
    clock_ += dur;
    push(EventKind::compute, tier_name(TierId::host), label, bytes, 0);
    return dur;
  }

  double duration(ChannelId ch, std::uint64_t bytes) const {
    const ChannelParams& p = params(ch);
    return p.fixed_latency + static_cast<double>(bytes) / p.bandwidth;
  }

  const ChannelParams& params(ChannelId ch) const {
    switch (ch) {
      case ChannelId::gds: return cfg_.gds;
      case ChannelId::s2h: return cfg_.s2h;
      case ChannelId::h2d: return cfg_.h2d;
      default: return cfg_.d2h;
    }
  }

 private:
  static void check_endpoints(ChannelId ch, TierId src, TierId dst) {
    bool ok = false;
    switch (ch) {
      case ChannelId::gds:
        ok = (src == TierId::storage && dst == TierId::device) ||
             (src == TierId::device && dst == TierId::storage);
        break;
      case ChannelId::s2h:
        ok = (src == TierId::storage && dst == TierId::host) ||
             (src == TierId::host && dst == TierId::storage);
        break;
      case ChannelId::h2d:
        ok = src == TierId::host && dst == TierId::device;
        break;
      case ChannelId::d2h:
        ok = src == TierId::device && dst == TierId::host;
        break;
    }
    if (!ok)
      fail(errc::config_error, std::string("channel ") + channel_name(ch) +
                                   " does not join " + tier_name(src) + " to " +
                                   tier_name(dst));
  }

  void begin_transfer(ChannelId ch, TierId src, const std::string& src_buffer,
                      std::uint64_t bytes) {
    auto it = tier(src).resident.find(src_buffer);
    if (it == tier(src).resident.end() || it->second < bytes)
      fail(errc::buffer_not_resident,
           src_buffer + " (" + std::to_string(bytes) + " bytes) not resident on " +
               tier_name(src) + " tier");
    (void)ch;
  }

  void finish_transfer(ChannelId ch, TierId src, TierId dst, const std::string& src_buffer,
                       std::uint64_t bytes, const std::string& dst_buffer, double dur) {
    check_endpoints(ch, src, dst);
    push(EventKind::transfer, channel_name(ch), src_buffer, bytes, 0);
    ChannelTotals& tot = ledger_.channel(ch);
    tot.count++;
    tot.bytes += bytes;
    tot.seconds += dur;
    alloc(dst, dst_buffer, bytes);
  }

  void push(EventKind kind, const char* where, const std::string& buffer,
            std::uint64_t bytes, std::uint64_t flops) {
    trace_.push_back(TraceEvent{clock_, kind, phase_, where, buffer, bytes, flops});
  }

  SimConfig cfg_;
  Tier device_, host_, storage_;
  double clock_ = 0.0;
  Phase phase_ = Phase::one;
  std::vector<TraceEvent> trace_;
  IoLedger ledger_;
};

inline void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& events) {
  out << "timestamp,kind,phase,channel_or_tier,buffer,bytes,flops\n";
  char buf[64];
  for (const TraceEvent& e : events) {
    std::snprintf(buf, sizeof buf, "%.9e", e.timestamp);
    out << buf << ',' << kind_name(e.kind) << ',' << phase_name(e.phase) << ',' << e.where
        << ',' << e.buffer << ',' << e.bytes << ',' << e.flops << "\n";
  }
}

/// Independent re-summation of a trace, used to audit ledgers and occupancy.
struct AuditResult {
  ChannelTotals gds, s2h, h2d, d2h;
  std::uint64_t peak_device_occupancy = 0;
  bool timestamps_monotone = true;
  bool phases_monotone = true;
  bool frees_matched = true;
  bool within_capacity = true;

  ChannelTotals& channel(ChannelId c) {
    switch (c) {
      case ChannelId::gds: return gds;
      case ChannelId::s2h: return s2h;
      case ChannelId::h2d: return h2d;
      default: return d2h;
    }
  }

  bool matches(const IoLedger& l) const {
    return gds == l.gds && s2h == l.s2h && h2d == l.h2d && d2h == l.d2h &&
           peak_device_occupancy == l.peak_device_occupancy;
  }
};

inline AuditResult audit_trace(const std::vector<TraceEvent>& events, const SimConfig& cfg,
                               std::uint64_t device_capacity) {
  AuditResult res;
  std::map<std::string, std::uint64_t> device, host, storage;
  std::uint64_t device_occ = 0;
  double last_t = 0.0;
  int last_phase = 0;
  auto tier_map = [&](const std::string& w) -> std::map<std::string, std::uint64_t>* {
    if (w == "device") return &device;
    if (w == "host") return &host;
    if (w == "storage") return &storage;
    return nullptr;
  };
  for (const TraceEvent& e : events) {
    if (e.timestamp < last_t) res.timestamps_monotone = false;
    last_t = e.timestamp;
    int ph = static_cast<int>(e.phase);
    if (ph < last_phase) res.phases_monotone = false;
    last_phase = ph;
    switch (e.kind) {
      case EventKind::transfer: {
        ChannelId ch = e.where == "gds"   ? ChannelId::gds
                       : e.where == "s2h" ? ChannelId::s2h
                       : e.where == "h2d" ? ChannelId::h2d
                                          : ChannelId::d2h;
        const ChannelParams& p = ch == ChannelId::gds   ? cfg.gds
                                 : ch == ChannelId::s2h ? cfg.s2h
                                 : ch == ChannelId::h2d ? cfg.h2d
                                                        : cfg.d2h;
        ChannelTotals& tot = res.channel(ch);
        tot.count++;
        tot.bytes += e.bytes;
        tot.seconds += p.fixed_latency + static_cast<double>(e.bytes) / p.bandwidth;
        break;
      }
      case EventKind::alloc: {
        auto* m = tier_map(e.where);
        if (!m) break;
        (*m)[e.buffer] += e.bytes;
        if (m == &device) {
          device_occ += e.bytes;
          res.peak_device_occupancy = std::max(res.peak_device_occupancy, device_occ);
          if (device_occ > device_capacity) res.within_capacity = false;
        }
        break;
      }
      case EventKind::free_buffer: {
        auto* m = tier_map(e.where);
        if (!m) break;
        auto it = m->find(e.buffer);
        if (it == m->end() || it->second != e.bytes) {
          res.frees_matched = false;
        } else {
          m->erase(it);
          if (m == &device) device_occ -= e.bytes;
        }
        break;
      }
      case EventKind::compute:
        break;
    }
  }
  return res;
}

}  // namespace aires

#endif  // AIRES_TIERED_SIM_HPP
