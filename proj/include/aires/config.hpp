#ifndef AIRES_CONFIG_HPP
#define AIRES_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "aires/memory_model.hpp"
#include "aires/sparse.hpp"

namespace aires {

struct ChannelParams {
  double bandwidth = 1e9;     // bytes per second
  double fixed_latency = 0.0;  // seconds per transfer
};

/// Cost model and capacities for one simulated run. Defaults follow the
/// qualitative ordering of a direct storage path that beats staging through
/// the host for large transfers.
struct SimConfig {
  ChannelParams gds{5e9, 2e-5};   // storage <-> device
  ChannelParams s2h{3e9, 2e-5};   // storage <-> host
  ChannelParams h2d{12e9, 2e-5};  // host -> device
  ChannelParams d2h{12e9, 2e-5};  // device -> host
  double flop_time = 1e-9;        // seconds per multiply-accumulate
  double host_byte_time = 5e-10;  // seconds per host-touched byte
  bool overlap = true;            // dual-way transfers share the window
  std::uint64_t device_bytes = 1ULL << 28;
  std::uint64_t host_bytes = 1ULL << 40;
  ElementSizes sizes;
  index_t col_tile = 256;

  MemoryBudget budget() const { return MemoryBudget{device_bytes, host_bytes, sizes}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(errc::config_error, key + ": bad real value '" + v + "'");
  }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    fail(errc::config_error, key + ": bad integer value '" + v + "'");
  }
}

inline bool parse_flag(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  fail(errc::config_error, key + ": bad flag value '" + v + "'");
}

}  // namespace detail

/// Parses `key = value` lines; `#` starts a comment; keys are namespaced
/// memory.*, channels.*, cost.*, io.*. Unknown keys are errors.
inline SimConfig parse_config(std::istream& in, SimConfig cfg = {}) {
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));

    auto channel = [&](ChannelParams& ch, const std::string& leaf) -> bool {
      if (leaf == "bandwidth") {
        ch.bandwidth = detail::parse_real(key, val);
        if (ch.bandwidth <= 0) fail(errc::config_error, key + ": bandwidth must be > 0");
        return true;
      }
      if (leaf == "latency") {
        ch.fixed_latency = detail::parse_real(key, val);
        if (ch.fixed_latency < 0) fail(errc::config_error, key + ": latency must be >= 0");
        return true;
      }
      return false;
    };

    bool ok = false;
    if (key == "memory.device_bytes") {
      cfg.device_bytes = detail::parse_uint(key, val);
      ok = true;
    } else if (key == "memory.host_bytes") {
      cfg.host_bytes = detail::parse_uint(key, val);
      ok = true;
    } else if (key == "memory.index_bytes") {
      cfg.sizes.index_bytes = detail::parse_uint(key, val);
      if (cfg.sizes.index_bytes < 1) fail(errc::config_error, key + ": must be >= 1");
      ok = true;
    } else if (key == "memory.value_bytes") {
      cfg.sizes.value_bytes = detail::parse_uint(key, val);
      if (cfg.sizes.value_bytes < 1) fail(errc::config_error, key + ": must be >= 1");
      ok = true;
    } else if (key.starts_with("channels.gds.")) {
      ok = channel(cfg.gds, key.substr(13));
    } else if (key.starts_with("channels.s2h.")) {
      ok = channel(cfg.s2h, key.substr(13));
    } else if (key.starts_with("channels.h2d.")) {
      ok = channel(cfg.h2d, key.substr(13));
    } else if (key.starts_with("channels.d2h.")) {
      ok = channel(cfg.d2h, key.substr(13));
    } else if (key == "cost.flop_time") {
      cfg.flop_time = detail::parse_real(key, val);
      if (cfg.flop_time < 0) fail(errc::config_error, key + ": must be >= 0");
      ok = true;
    } else if (key == "cost.host_byte_time") {
      cfg.host_byte_time = detail::parse_real(key, val);
      if (cfg.host_byte_time < 0) fail(errc::config_error, key + ": must be >= 0");
      ok = true;
    } else if (key == "cost.col_tile") {
      cfg.col_tile = detail::parse_uint(key, val);
      ok = true;
    } else if (key == "io.overlap") {
      cfg.overlap = detail::parse_flag(key, val);
      ok = true;
    }
    if (!ok)
      fail(errc::config_error, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

inline SimConfig load_config(const std::string& path, SimConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return parse_config(in, cfg);
}

}  // namespace aires

#endif  // AIRES_CONFIG_HPP
