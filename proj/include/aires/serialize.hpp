#ifndef AIRES_SERIALIZE_HPP
#define AIRES_SERIALIZE_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "aires/partition.hpp"
#include "aires/sparse.hpp"

namespace aires {

// ---------------------------------------------------------------------------
// FNV-1a 64 over the canonical little-endian byte serialization.
// ---------------------------------------------------------------------------

struct Fnv1a64 {
  std::uint64_t state = 14695981039346656037ULL;

  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; i++) {
      state ^= p[i];
      state *= 1099511628211ULL;
    }
  }

  void update_u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; i++) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    update(buf, 8);
  }

  void update_f64(double v) { update_u64(std::bit_cast<std::uint64_t>(v)); }
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
  Fnv1a64 h;
  h.update(data, n);
  return h.state;
}

/// Checksum of the canonical CSR byte stream: n_rows, n_cols, nnz, row_ptr,
/// col_idx as u64 LE, then values as f64 LE bit patterns.
inline std::uint64_t checksum(const CsrMatrix& a) {
  Fnv1a64 h;
  h.update_u64(a.n_rows);
  h.update_u64(a.n_cols);
  h.update_u64(a.nnz());
  for (index_t v : a.row_ptr) h.update_u64(v);
  for (index_t v : a.col_idx) h.update_u64(v);
  for (value_t v : a.values) h.update_f64(v);
  return h.state;
}

// ---------------------------------------------------------------------------
// Little-endian stream helpers.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_uint(std::ostream& out, std::uint64_t v, unsigned width) {
  char buf[8];
  for (unsigned i = 0; i < width; i++) buf[i] = static_cast<char>(v >> (8 * i));
  out.write(buf, width);
}

inline std::uint64_t get_uint(std::istream& in, unsigned width) {
  unsigned char buf[8] = {};
  in.read(reinterpret_cast<char*>(buf), width);
  if (!in) fail(errc::parse_error, "truncated binary stream");
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; i++) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

inline void put_value(std::ostream& out, double v, unsigned width) {
  if (width == 8) {
    put_uint(out, std::bit_cast<std::uint64_t>(v), 8);
  } else {
    put_uint(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
  }
}

inline double get_value(std::istream& in, unsigned width) {
  if (width == 8) return std::bit_cast<double>(get_uint(in, 8));
  return std::bit_cast<float>(static_cast<std::uint32_t>(get_uint(in, 4)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrix container: "ARSM" magic, version, dimensions, then the three CSR
// arrays, all 64-bit little-endian.
// ---------------------------------------------------------------------------

inline constexpr char kMatrixMagic[4] = {'A', 'R', 'S', 'M'};

inline void write_matrix(std::ostream& out, const CsrMatrix& a) {
  out.write(kMatrixMagic, 4);
  detail::put_uint(out, 1, 8);  // version
  detail::put_uint(out, a.n_rows, 8);
  detail::put_uint(out, a.n_cols, 8);
  detail::put_uint(out, a.nnz(), 8);
  for (index_t v : a.row_ptr) detail::put_uint(out, v, 8);
  for (index_t v : a.col_idx) detail::put_uint(out, v, 8);
  for (value_t v : a.values) detail::put_value(out, v, 8);
}

inline void write_matrix_file(const std::string& path, const CsrMatrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  write_matrix(out, a);
  if (!out) fail(errc::io_error, "short write to " + path);
}

inline CsrMatrix read_matrix(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMatrixMagic, 4) != 0)
    fail(errc::parse_error, "bad matrix container magic");
  std::uint64_t version = detail::get_uint(in, 8);
  if (version != 1)
    fail(errc::unsupported_format, "matrix container version " + std::to_string(version));
  CsrMatrix a;
  a.n_rows = detail::get_uint(in, 8);
  a.n_cols = detail::get_uint(in, 8);
  std::uint64_t nnz = detail::get_uint(in, 8);
  a.row_ptr.resize(a.n_rows + 1);
  a.col_idx.resize(nnz);
  a.values.resize(nnz);
  for (auto& v : a.row_ptr) v = detail::get_uint(in, 8);
  for (auto& v : a.col_idx) v = detail::get_uint(in, 8);
  for (auto& v : a.values) v = detail::get_value(in, 8);
  check_canonical(a);
  return a;
}

inline CsrMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return read_matrix(in);
}

// ---------------------------------------------------------------------------
// Segment container: per segment a length-prefixed record. Record byte
// length, then seg_index, start_row, end_row, nnz (u64), then the local row
// pointers and column indices at index_bytes wide and values at value_bytes
// wide, little-endian throughout.
// ---------------------------------------------------------------------------

inline void write_segments(std::ostream& out, const std::vector<RobwSegment>& segs,
                           ElementSizes s = {}) {
  for (const RobwSegment& seg : segs) {
    if (s.index_bytes < 8) {
      std::uint64_t limit = (1ULL << (8 * s.index_bytes)) - 1;
      for (index_t v : seg.row_ptr_local)
        if (v > limit) fail(errc::capacity_exceeded, "pointer exceeds index width");
      for (index_t v : seg.col_idx)
        if (v > limit) fail(errc::capacity_exceeded, "column index exceeds index width");
    }
    std::uint64_t record = 32 + seg.row_ptr_local.size() * s.index_bytes +
                           seg.nnz() * (s.index_bytes + s.value_bytes);
    detail::put_uint(out, record, 8);
    detail::put_uint(out, seg.seg_index, 8);
    detail::put_uint(out, seg.start_row, 8);
    detail::put_uint(out, seg.end_row, 8);
    detail::put_uint(out, seg.nnz(), 8);
    for (index_t v : seg.row_ptr_local)
      detail::put_uint(out, v, static_cast<unsigned>(s.index_bytes));
    for (index_t v : seg.col_idx)
      detail::put_uint(out, v, static_cast<unsigned>(s.index_bytes));
    for (value_t v : seg.values)
      detail::put_value(out, v, static_cast<unsigned>(s.value_bytes));
  }
}

inline std::vector<RobwSegment> read_segments(std::istream& in, ElementSizes s = {}) {
  std::vector<RobwSegment> segs;
  while (in.peek() != std::istream::traits_type::eof()) {
    std::uint64_t record = detail::get_uint(in, 8);
    RobwSegment seg;
    seg.seg_index = detail::get_uint(in, 8);
    seg.start_row = detail::get_uint(in, 8);
    seg.end_row = detail::get_uint(in, 8);
    std::uint64_t nnz = detail::get_uint(in, 8);
    if (seg.end_row < seg.start_row) fail(errc::parse_error, "segment row range inverted");
    std::uint64_t rows = seg.end_row - seg.start_row;
    if (record != 32 + (rows + 1) * s.index_bytes + nnz * (s.index_bytes + s.value_bytes))
      fail(errc::parse_error, "segment record length mismatch");
    seg.row_ptr_local.resize(rows + 1);
    seg.col_idx.resize(nnz);
    seg.values.resize(nnz);
    for (auto& v : seg.row_ptr_local)
      v = detail::get_uint(in, static_cast<unsigned>(s.index_bytes));
    for (auto& v : seg.col_idx)
      v = detail::get_uint(in, static_cast<unsigned>(s.index_bytes));
    for (auto& v : seg.values)
      v = detail::get_value(in, static_cast<unsigned>(s.value_bytes));
    seg.byte_size = calc_mem(rows, nnz, s);
    segs.push_back(std::move(seg));
  }
  return segs;
}

// ---------------------------------------------------------------------------
// Weight file: 16-byte header (rows, cols as u64 LE), then row-major f64.
// ---------------------------------------------------------------------------

inline void write_weights(std::ostream& out, const DenseMatrix& w) {
  detail::put_uint(out, w.n_rows, 8);
  detail::put_uint(out, w.n_cols, 8);
  for (value_t v : w.data) detail::put_value(out, v, 8);
}

inline void write_weights_file(const std::string& path, const DenseMatrix& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  write_weights(out, w);
  if (!out) fail(errc::io_error, "short write to " + path);
}

inline DenseMatrix read_weights(std::istream& in) {
  DenseMatrix w;
  w.n_rows = detail::get_uint(in, 8);
  w.n_cols = detail::get_uint(in, 8);
  w.data.resize(w.n_rows * w.n_cols);
  for (auto& v : w.data) v = detail::get_value(in, 8);
  return w;
}

inline DenseMatrix read_weights_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return read_weights(in);
}

}  // namespace aires

#endif  // AIRES_SERIALIZE_HPP
