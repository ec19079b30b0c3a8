#ifndef AIRES_SPARSE_HPP
#define AIRES_SPARSE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "aires/error.hpp"

namespace aires {

using index_t = std::uint64_t;
using value_t = double;

/// Per-element byte sizes used by the memory model and on-disk segment
/// containers. Internal arithmetic is always 64-bit; these only feed the
/// budget math and serialization widths.
struct ElementSizes {
  std::uint64_t index_bytes = 8;  // I
  std::uint64_t value_bytes = 8;  // V
};

/// Compressed sparse row. Canonical form: row_ptr[0]=0, non-decreasing,
/// col_idx strictly increasing within each row, no duplicates, no stored
/// exact zeros from construction.
struct CsrMatrix {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<index_t> row_ptr;  // length n_rows+1
  std::vector<index_t> col_idx;  // length nnz
  std::vector<value_t> values;   // length nnz

  index_t nnz() const { return static_cast<index_t>(col_idx.size()); }

  bool operator==(const CsrMatrix&) const = default;
};

/// Compressed sparse column; mirror of CsrMatrix with rows/columns swapped.
struct CscMatrix {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<index_t> col_ptr;  // length n_cols+1
  std::vector<index_t> row_idx;  // length nnz
  std::vector<value_t> values;   // length nnz

  index_t nnz() const { return static_cast<index_t>(row_idx.size()); }

  bool operator==(const CscMatrix&) const = default;
};

/// Row-major dense matrix, oracle-side representation.
struct DenseMatrix {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<value_t> data;  // n_rows * n_cols

  value_t& at(index_t r, index_t c) { return data[r * n_cols + c]; }
  value_t at(index_t r, index_t c) const { return data[r * n_cols + c]; }

  bool operator==(const DenseMatrix&) const = default;
};

inline DenseMatrix make_dense(index_t rows, index_t cols) {
  return DenseMatrix{rows, cols, std::vector<value_t>(rows * cols, 0.0)};
}

/// Builds a canonical CSR matrix from triplets. Duplicate (row,col) entries
/// are summed; sums that cancel to exactly 0.0 are dropped.
inline CsrMatrix csr_from_triplets(std::span<const index_t> rows,
                                   std::span<const index_t> cols,
                                   std::span<const value_t> vals,
                                   index_t n_rows, index_t n_cols) {
  if (rows.size() != cols.size() || rows.size() != vals.size())
    fail(errc::index_out_of_range, "triplet arrays must have equal length");
  for (std::size_t i = 0; i < rows.size(); i++) {
    if (rows[i] >= n_rows || cols[i] >= n_cols)
      fail(errc::index_out_of_range,
           "triplet (" + std::to_string(rows[i]) + "," + std::to_string(cols[i]) +
               ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    if (cols[a] != cols[b]) return cols[a] < cols[b];
    return a < b;  // stable within a cell so summation order is input order
  });

  CsrMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_ptr.assign(n_rows + 1, 0);
  m.col_idx.reserve(rows.size());
  m.values.reserve(rows.size());

  std::size_t i = 0;
  while (i < order.size()) {
    index_t r = rows[order[i]];
    index_t c = cols[order[i]];
    value_t sum = 0.0;
    while (i < order.size() && rows[order[i]] == r && cols[order[i]] == c) {
      sum += vals[order[i]];
      i++;
    }
    if (sum != 0.0) {
      m.col_idx.push_back(c);
      m.values.push_back(sum);
      m.row_ptr[r + 1]++;
    }
  }
  for (index_t r = 0; r < n_rows; r++) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

inline CscMatrix csr_to_csc(const CsrMatrix& a) {
  CscMatrix b;
  b.n_rows = a.n_rows;
  b.n_cols = a.n_cols;
  b.col_ptr.assign(a.n_cols + 1, 0);
  b.row_idx.resize(a.nnz());
  b.values.resize(a.nnz());

  for (index_t k = 0; k < a.nnz(); k++) b.col_ptr[a.col_idx[k] + 1]++;
  for (index_t c = 0; c < a.n_cols; c++) b.col_ptr[c + 1] += b.col_ptr[c];

  std::vector<index_t> cursor(b.col_ptr.begin(), b.col_ptr.end() - 1);
  for (index_t r = 0; r < a.n_rows; r++) {
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; k++) {
      index_t c = a.col_idx[k];
      b.row_idx[cursor[c]] = r;
      b.values[cursor[c]] = a.values[k];
      cursor[c]++;
    }
  }
  return b;
}

inline CsrMatrix csc_to_csr(const CscMatrix& b) {
  CsrMatrix a;
  a.n_rows = b.n_rows;
  a.n_cols = b.n_cols;
  a.row_ptr.assign(b.n_rows + 1, 0);
  a.col_idx.resize(b.nnz());
  a.values.resize(b.nnz());

  for (index_t k = 0; k < b.nnz(); k++) a.row_ptr[b.row_idx[k] + 1]++;
  for (index_t r = 0; r < b.n_rows; r++) a.row_ptr[r + 1] += a.row_ptr[r];

  std::vector<index_t> cursor(a.row_ptr.begin(), a.row_ptr.end() - 1);
  for (index_t c = 0; c < b.n_cols; c++) {
    for (index_t k = b.col_ptr[c]; k < b.col_ptr[c + 1]; k++) {
      index_t r = b.row_idx[k];
      a.col_idx[cursor[r]] = c;
      a.values[cursor[r]] = b.values[k];
      cursor[r]++;
    }
  }
  return a;
}

constexpr std::uint64_t kDefaultDenseCap = 100'000'000;

inline DenseMatrix to_dense(const CsrMatrix& a, std::uint64_t cap = kDefaultDenseCap) {
  if (a.n_rows != 0 && a.n_cols != 0 && a.n_rows > cap / a.n_cols)
    fail(errc::dense_too_large, std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols) +
                                    " exceeds dense cap " + std::to_string(cap));
  DenseMatrix d = make_dense(a.n_rows, a.n_cols);
  for (index_t r = 0; r < a.n_rows; r++)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; k++)
      d.at(r, a.col_idx[k]) = a.values[k];
  return d;
}

/// Compressed byte footprint: pointer array + index array + value array.
inline std::uint64_t byte_size(const CsrMatrix& a, ElementSizes s = {}) {
  return (a.n_rows + 1) * s.index_bytes + a.nnz() * s.index_bytes + a.nnz() * s.value_bytes;
}

inline std::uint64_t byte_size(const CscMatrix& b, ElementSizes s = {}) {
  return (b.n_cols + 1) * s.index_bytes + b.nnz() * s.index_bytes + b.nnz() * s.value_bytes;
}

/// Validates canonical-form invariants; used by tests and ingestion.
inline void check_canonical(const CsrMatrix& a) {
  if (a.row_ptr.size() != a.n_rows + 1 || a.row_ptr.front() != 0 ||
      a.row_ptr.back() != a.nnz() || a.values.size() != a.col_idx.size())
    fail(errc::index_out_of_range, "malformed CSR arrays");
  for (index_t r = 0; r < a.n_rows; r++) {
    if (a.row_ptr[r] > a.row_ptr[r + 1]) fail(errc::index_out_of_range, "row_ptr not monotone");
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; k++) {
      if (a.col_idx[k] >= a.n_cols) fail(errc::index_out_of_range, "col_idx out of range");
      if (k > a.row_ptr[r] && a.col_idx[k - 1] >= a.col_idx[k])
        fail(errc::index_out_of_range, "col_idx not strictly increasing in row");
    }
  }
}

inline CsrMatrix csr_identity(index_t n) {
  CsrMatrix m;
  m.n_rows = m.n_cols = n;
  m.row_ptr.resize(n + 1);
  m.col_idx.resize(n);
  m.values.assign(n, 1.0);
  for (index_t i = 0; i <= n; i++) m.row_ptr[i] = i;
  std::iota(m.col_idx.begin(), m.col_idx.end(), index_t{0});
  return m;
}

}  // namespace aires

#endif  // AIRES_SPARSE_HPP
