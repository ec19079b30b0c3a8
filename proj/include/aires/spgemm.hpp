#ifndef AIRES_SPGEMM_HPP
#define AIRES_SPGEMM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aires/partition.hpp"
#include "aires/sparse.hpp"

namespace aires {

constexpr index_t kDefaultColTile = 256;

namespace detail {

/// Two-pointer intersection of one CSR row with one CSC column. Terms are
/// accumulated in ascending inner index, so the sum for a cell never depends
/// on which row block the row arrived in.
inline bool dot_row_col(std::span<const index_t> a_cols, std::span<const value_t> a_vals,
                        std::span<const index_t> b_rows, std::span<const value_t> b_vals,
                        value_t& out, std::uint64_t& macs) {
  std::size_t i = 0, j = 0;
  bool hit = false;
  value_t sum = 0.0;
  while (i < a_cols.size() && j < b_rows.size()) {
    if (a_cols[i] < b_rows[j]) {
      i++;
    } else if (a_cols[i] > b_rows[j]) {
      j++;
    } else {
      sum += a_vals[i] * b_vals[j];
      macs++;
      hit = true;
      i++;
      j++;
    }
  }
  if (hit) out = sum;
  return hit;
}

}  // namespace detail

/// One multiplied row block of C, positioned by its row range.
struct CsrBlockResult {
  index_t start_row = 0;
  index_t end_row = 0;
  CsrMatrix fragment;       // fragment.n_rows == end_row - start_row
  std::uint64_t flops = 0;  // multiply-accumulate count (structural matches)
};

/// Multiplies `rows` CSR rows (raw arrays, rebased pointers) against B held
/// as CSC. The symbolic pass counts output nnz per row, the allocation is
/// sized exactly, then the numeric pass fills values. B's columns are walked
/// in tiles of tile_cols; the tiling changes traversal order only, never
/// values. Cells whose index intersection is non-empty are stored even when
/// the sum is exactly zero.
inline CsrBlockResult spgemm_block(std::span<const index_t> row_ptr,
                                   std::span<const index_t> col_idx,
                                   std::span<const value_t> values, index_t rows,
                                   index_t a_n_cols, const CscMatrix& b,
                                   index_t start_row = 0,
                                   index_t tile_cols = kDefaultColTile) {
  if (a_n_cols != b.n_rows)
    fail(errc::dimension_mismatch, "inner dimensions " + std::to_string(a_n_cols) +
                                       " and " + std::to_string(b.n_rows) + " differ");
  if (tile_cols == 0) tile_cols = kDefaultColTile;

  CsrBlockResult out;
  out.start_row = start_row;
  out.end_row = start_row + rows;
  CsrMatrix& c = out.fragment;
  c.n_rows = rows;
  c.n_cols = b.n_cols;
  c.row_ptr.assign(rows + 1, 0);

  auto a_row_cols = [&](index_t r) {
    return col_idx.subspan(row_ptr[r], row_ptr[r + 1] - row_ptr[r]);
  };
  auto a_row_vals = [&](index_t r) {
    return values.subspan(row_ptr[r], row_ptr[r + 1] - row_ptr[r]);
  };
  auto b_col_rows = [&](index_t j) {
    return std::span<const index_t>(b.row_idx).subspan(b.col_ptr[j],
                                                       b.col_ptr[j + 1] - b.col_ptr[j]);
  };
  auto b_col_vals = [&](index_t j) {
    return std::span<const value_t>(b.values).subspan(b.col_ptr[j],
                                                      b.col_ptr[j + 1] - b.col_ptr[j]);
  };

  // symbolic pass: exact per-row counts plus the MAC total
  std::uint64_t macs = 0;
  for (index_t r = 0; r < rows; r++) {
    index_t count = 0;
    for (index_t jt = 0; jt < b.n_cols; jt += tile_cols) {
      index_t jend = std::min(jt + tile_cols, b.n_cols);
      for (index_t j = jt; j < jend; j++) {
        value_t v;
        if (detail::dot_row_col(a_row_cols(r), a_row_vals(r), b_col_rows(j), b_col_vals(j),
                                v, macs))
          count++;
      }
    }
    c.row_ptr[r + 1] = c.row_ptr[r] + count;
  }
  out.flops = macs;

  c.col_idx.resize(c.row_ptr[rows]);
  c.values.resize(c.row_ptr[rows]);

  // numeric pass
  std::uint64_t dummy = 0;
  for (index_t r = 0; r < rows; r++) {
    index_t at = c.row_ptr[r];
    for (index_t jt = 0; jt < b.n_cols; jt += tile_cols) {
      index_t jend = std::min(jt + tile_cols, b.n_cols);
      for (index_t j = jt; j < jend; j++) {
        value_t v;
        if (detail::dot_row_col(a_row_cols(r), a_row_vals(r), b_col_rows(j), b_col_vals(j),
                                v, dummy)) {
          c.col_idx[at] = j;
          c.values[at] = v;
          at++;
        }
      }
    }
  }
  return out;
}

inline CsrBlockResult spgemm_block(const RobwSegment& seg, index_t a_n_cols,
                                   const CscMatrix& b,
                                   index_t tile_cols = kDefaultColTile) {
  return spgemm_block(seg.row_ptr_local, seg.col_idx, seg.values, seg.rows(), a_n_cols, b,
                      seg.start_row, tile_cols);
}

/// Whole-matrix in-core product, one block spanning every row.
inline CsrMatrix spgemm_full(const CsrMatrix& a, const CscMatrix& b,
                             index_t tile_cols = kDefaultColTile) {
  return spgemm_block(a.row_ptr, a.col_idx, a.values, a.n_rows, a.n_cols, b, 0, tile_cols)
      .fragment;
}

inline CsrMatrix spgemm_full(const CsrMatrix& a, const CsrMatrix& b,
                             index_t tile_cols = kDefaultColTile) {
  return spgemm_full(a, csr_to_csc(b), tile_cols);
}

/// Stitches consecutive row blocks back into one matrix. Blocks must tile
/// [0, n_rows) exactly in order.
inline CsrMatrix assemble_blocks(const std::vector<CsrBlockResult>& blocks, index_t n_rows,
                                 index_t n_cols) {
  CsrMatrix c;
  c.n_rows = n_rows;
  c.n_cols = n_cols;
  c.row_ptr.assign(n_rows + 1, 0);
  index_t expect = 0;
  for (const CsrBlockResult& bp : blocks) {
    if (bp.start_row != expect)
      fail(errc::index_out_of_range, "row blocks are not consecutive");
    if (bp.fragment.n_cols != n_cols)
      fail(errc::dimension_mismatch, "block column count mismatch");
    expect = bp.end_row;
  }
  if (expect != n_rows)
    fail(errc::index_out_of_range, "row blocks do not cover the matrix");
  for (const CsrBlockResult& bp : blocks) {
    for (index_t r = 0; r < bp.fragment.n_rows; r++)
      c.row_ptr[bp.start_row + r + 1] =
          bp.fragment.row_ptr[r + 1] - bp.fragment.row_ptr[r];
    c.col_idx.insert(c.col_idx.end(), bp.fragment.col_idx.begin(),
                     bp.fragment.col_idx.end());
    c.values.insert(c.values.end(), bp.fragment.values.begin(), bp.fragment.values.end());
  }
  for (index_t r = 0; r < n_rows; r++) c.row_ptr[r + 1] += c.row_ptr[r];
  return c;
}

/// Textbook triple-loop product with fixed ascending-k order. mac_count, when
/// given, receives the number of products with both operands nonzero.
inline DenseMatrix dense_oracle(const DenseMatrix& a, const DenseMatrix& b,
                                std::uint64_t* mac_count = nullptr) {
  if (a.n_cols != b.n_rows)
    fail(errc::dimension_mismatch, "inner dimensions " + std::to_string(a.n_cols) +
                                       " and " + std::to_string(b.n_rows) + " differ");
  DenseMatrix c = make_dense(a.n_rows, b.n_cols);
  std::uint64_t macs = 0;
  for (index_t i = 0; i < a.n_rows; i++)
    for (index_t j = 0; j < b.n_cols; j++) {
      value_t sum = 0.0;
      for (index_t k = 0; k < a.n_cols; k++) {
        value_t av = a.at(i, k), bv = b.at(k, j);
        sum += av * bv;
        if (av != 0.0 && bv != 0.0) macs++;
      }
      c.at(i, j) = sum;
    }
  if (mac_count) *mac_count = macs;
  return c;
}

}  // namespace aires

#endif  // AIRES_SPGEMM_HPP
