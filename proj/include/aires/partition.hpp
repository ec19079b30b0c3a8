#ifndef AIRES_PARTITION_HPP
#define AIRES_PARTITION_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "aires/memory_model.hpp"
#include "aires/sparse.hpp"

namespace aires {

// ---------------------------------------------------------------------------
// Row-block-wise partitioning: greedy maximal runs of whole rows admitted
// under calc_mem(k, q) <= m_a.
// ---------------------------------------------------------------------------

/// A whole-row slice of a CSR matrix with rebased row pointers.
struct RobwSegment {
  index_t seg_index = 0;
  index_t start_row = 0;
  index_t end_row = 0;                  // exclusive
  std::vector<index_t> row_ptr_local;   // length rows()+1, row_ptr_local[0] == 0
  std::vector<index_t> col_idx;
  std::vector<value_t> values;
  std::uint64_t byte_size = 0;          // calc_mem(rows(), nnz())

  index_t rows() const { return end_row - start_row; }
  index_t nnz() const { return static_cast<index_t>(col_idx.size()); }
};

inline RobwSegment slice_rows(const CsrMatrix& a, index_t start_row, index_t end_row,
                              index_t seg_index = 0, ElementSizes s = {}) {
  RobwSegment seg;
  seg.seg_index = seg_index;
  seg.start_row = start_row;
  seg.end_row = end_row;
  index_t base = a.row_ptr[start_row];
  seg.row_ptr_local.resize(end_row - start_row + 1);
  for (index_t r = start_row; r <= end_row; r++)
    seg.row_ptr_local[r - start_row] = a.row_ptr[r] - base;
  seg.col_idx.assign(a.col_idx.begin() + base, a.col_idx.begin() + a.row_ptr[end_row]);
  seg.values.assign(a.values.begin() + base, a.values.begin() + a.row_ptr[end_row]);
  seg.byte_size = calc_mem(seg.rows(), seg.nnz(), s);
  return seg;
}

/// Splits A into maximal consecutive whole-row blocks, each fitting the
/// admission budget m_a. Throws row_too_large if a single row already
/// overflows the budget.
inline std::vector<RobwSegment> robw_partition(const CsrMatrix& a, std::uint64_t m_a,
                                               ElementSizes s = {}) {
  std::vector<RobwSegment> segs;
  index_t r = 0;
  while (r < a.n_rows) {
    index_t start = r;
    std::uint64_t k = 0, q = 0;
    while (r < a.n_rows) {
      std::uint64_t rn = a.row_ptr[r + 1] - a.row_ptr[r];
      if (calc_mem(k + 1, q + rn, s) > m_a) break;
      k++;
      q += rn;
      r++;
    }
    if (k == 0)
      fail(errc::row_too_large,
           "row " + std::to_string(r) + " needs " +
               std::to_string(calc_mem(1, a.row_ptr[r + 1] - a.row_ptr[r], s)) +
               " bytes, block budget is " + std::to_string(m_a));
    segs.push_back(slice_rows(a, start, r, static_cast<index_t>(segs.size()), s));
  }
  return segs;
}

// ---------------------------------------------------------------------------
// Static byte tiling of the flattened (col_idx, value) element stream, the
// fixed-capacity baseline. Rows cut by a tile boundary leave partial
// fragments which the host must stitch onto the next tile.
// ---------------------------------------------------------------------------

inline std::uint64_t pair_bytes(ElementSizes s = {}) {
  return s.index_bytes + s.value_bytes;
}

inline std::uint64_t row_begin_byte(const CsrMatrix& a, index_t r, ElementSizes s = {}) {
  return a.row_ptr[r] * pair_bytes(s);
}

inline std::uint64_t row_end_byte(const CsrMatrix& a, index_t r, ElementSizes s = {}) {
  return a.row_ptr[r + 1] * pair_bytes(s);
}

inline std::uint64_t stream_bytes(const CsrMatrix& a, ElementSizes s = {}) {
  return a.nnz() * pair_bytes(s);
}

/// Half-open byte range in the element stream. A default-constructed or
/// zero-length fragment means "no partial row".
struct StreamFragment {
  std::uint64_t begin_byte = 0;
  std::uint64_t end_byte = 0;

  std::uint64_t size() const { return end_byte - begin_byte; }
  bool empty() const { return begin_byte == end_byte; }

  bool operator==(const StreamFragment&) const = default;
};

/// One tile of the element stream. Rows in [begin_row, end_row) lie fully
/// inside [begin_byte, end_byte). leading_partial is the head slice of a row
/// begun in an earlier tile; trailing_partial covers the row cut by
/// end_byte, measured from that row's true start byte. The trailing start
/// can precede begin_byte when a row spans several tiles, so re-stitching
/// ships those bytes again.
struct RawSegment {
  index_t seg_index = 0;
  std::uint64_t begin_byte = 0;
  std::uint64_t end_byte = 0;
  index_t begin_row = 0;
  index_t end_row = 0;
  StreamFragment leading_partial;
  StreamFragment trailing_partial;

  std::uint64_t payload_bytes() const { return end_byte - begin_byte; }
  index_t rows() const { return end_row - begin_row; }

  bool operator==(const RawSegment&) const = default;
};

/// Bytes shipped to the device for one tile: raw payload plus a re-derived
/// pointer array for its complete rows.
inline std::uint64_t segment_transfer_bytes(const RawSegment& seg, ElementSizes s = {}) {
  return seg.payload_bytes() + (seg.rows() + 1) * s.index_bytes;
}

/// Cuts the element stream at fixed m_a-byte boundaries, ignoring row
/// boundaries. Each row is completed by exactly one tile (the first whose
/// end covers it and whose start does not cut it).
inline std::vector<RawSegment> maxmemory_partition(const CsrMatrix& a, std::uint64_t m_a,
                                                   ElementSizes s = {}) {
  if (m_a == 0) fail(errc::insufficient_device_memory, "tile size is zero");
  std::vector<RawSegment> segs;
  std::uint64_t total = stream_bytes(a, s);
  index_t cursor = 0;
  for (std::uint64_t b = 0; b < total; b += m_a) {
    RawSegment seg;
    seg.seg_index = static_cast<index_t>(segs.size());
    seg.begin_byte = b;
    seg.end_byte = std::min(b + m_a, total);
    if (cursor < a.n_rows && row_begin_byte(a, cursor, s) < b) {
      seg.leading_partial =
          StreamFragment{b, std::min(row_end_byte(a, cursor, s), seg.end_byte)};
      if (row_end_byte(a, cursor, s) <= seg.end_byte)
        cursor++;  // split row's tail ends here; only the merged path completes it
    } else {
      seg.leading_partial = StreamFragment{b, b};
    }
    seg.begin_row = cursor;
    while (cursor < a.n_rows && row_end_byte(a, cursor, s) <= seg.end_byte) cursor++;
    seg.end_row = cursor;
    if (cursor < a.n_rows && row_begin_byte(a, cursor, s) < seg.end_byte)
      seg.trailing_partial = StreamFragment{row_begin_byte(a, cursor, s), seg.end_byte};
    else
      seg.trailing_partial = StreamFragment{seg.end_byte, seg.end_byte};
    segs.push_back(seg);
  }
  return segs;
}

/// Stitches a trailing fragment onto the following tile. The fragment must
/// end exactly where the tile begins. The result's leading row is complete:
/// its rows start at the split row and run through the tile's own complete
/// rows, and the tile's trailing fragment carries over. merge_bytes grows by
/// the fragment size.
inline RawSegment merge_partial(const StreamFragment& frag, const RawSegment& next,
                                const CsrMatrix& a, std::uint64_t& merge_bytes,
                                ElementSizes s = {}) {
  if (frag.empty()) return next;
  if (frag.end_byte != next.begin_byte)
    fail(errc::non_adjacent_fragments,
         "fragment ends at byte " + std::to_string(frag.end_byte) +
             " but next segment begins at " + std::to_string(next.begin_byte));
  std::uint64_t target = frag.begin_byte / pair_bytes(s);
  auto it = std::upper_bound(a.row_ptr.begin(), a.row_ptr.end(), target);
  index_t split = static_cast<index_t>(it - a.row_ptr.begin()) - 1;
  RawSegment m;
  m.seg_index = next.seg_index;
  m.begin_byte = frag.begin_byte;
  m.end_byte = next.end_byte;
  m.begin_row = split;
  m.end_row = next.end_row;
  m.leading_partial = StreamFragment{frag.begin_byte, frag.begin_byte};
  m.trailing_partial = next.trailing_partial;
  merge_bytes += frag.size();
  return m;
}

/// Total fragment bytes the host re-stitches for a given tiling; a row that
/// spans several tiles contributes its earlier bytes once per extra tile.
inline std::uint64_t planned_merge_bytes(const CsrMatrix& a, std::uint64_t m_a,
                                         ElementSizes s = {}) {
  std::uint64_t total = 0;
  StreamFragment pending{0, 0};
  for (const RawSegment& tile : maxmemory_partition(a, m_a, s)) {
    RawSegment seg = merge_partial(pending, tile, a, total, s);
    pending = seg.trailing_partial;
  }
  return total;
}

}  // namespace aires

#endif  // AIRES_PARTITION_HPP
