#ifndef AIRES_MEMORY_MODEL_HPP
#define AIRES_MEMORY_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "aires/sparse.hpp"

namespace aires {

/// Byte-level footprint of one operand:
///   alpha:         values array bytes (nnz * V)
///   pointer_bytes: pointer array bytes ((dim+1) * I)
///   id_bytes:      index array bytes (nnz * I)
struct MatrixStats {
  std::uint64_t alpha = 0;
  double sparsity_pct = 100.0;  // 100 * (1 - nnz / (rows*cols))
  std::uint64_t pointer_bytes = 0;
  std::uint64_t id_bytes = 0;

  std::uint64_t total_bytes() const { return alpha + pointer_bytes + id_bytes; }
};

/// Capacities the scheduler runs against.
struct MemoryBudget {
  std::uint64_t device_total = 0;
  std::uint64_t host_total = 0;
  ElementSizes element_sizes;
};

inline double sparsity_percent(index_t n_rows, index_t n_cols, index_t nnz) {
  if (n_rows == 0 || n_cols == 0) return 100.0;
  double cells = static_cast<double>(n_rows) * static_cast<double>(n_cols);
  return 100.0 * (1.0 - static_cast<double>(nnz) / cells);
}

inline MatrixStats stats_of(const CsrMatrix& a, ElementSizes s = {}) {
  MatrixStats st;
  st.alpha = a.nnz() * s.value_bytes;
  st.pointer_bytes = (a.n_rows + 1) * s.index_bytes;
  st.id_bytes = a.nnz() * s.index_bytes;
  st.sparsity_pct = sparsity_percent(a.n_rows, a.n_cols, a.nnz());
  return st;
}

inline MatrixStats stats_of(const CscMatrix& b, ElementSizes s = {}) {
  MatrixStats st;
  st.alpha = b.nnz() * s.value_bytes;
  st.pointer_bytes = (b.n_cols + 1) * s.index_bytes;
  st.id_bytes = b.nnz() * s.index_bytes;
  st.sparsity_pct = sparsity_percent(b.n_rows, b.n_cols, b.nnz());
  return st;
}

/// Output reservation estimate:
///   ceil(3 * alpha_a * (100-s_a)/100 * (1 + alpha_b/alpha_a + (100-s_b)/100))
/// Defined as 0 for an empty A. The product is snapped to the nearest integer
/// before ceil so values that are integral in exact arithmetic do not round up
/// through float noise.
inline std::uint64_t estimate_output_memory(std::uint64_t alpha_a, double s_a,
                                            std::uint64_t alpha_b, double s_b) {
  if (alpha_a == 0) return 0;
  double x = 3.0 * static_cast<double>(alpha_a) * ((100.0 - s_a) / 100.0) *
             (1.0 + static_cast<double>(alpha_b) / static_cast<double>(alpha_a) +
              (100.0 - s_b) / 100.0);
  double snapped = std::round(x);
  if (std::abs(x - snapped) <= 1e-9 * std::max(1.0, std::abs(x))) x = snapped;
  return static_cast<std::uint64_t>(std::ceil(x));
}

inline std::uint64_t estimate_output_memory(const MatrixStats& a, const MatrixStats& b) {
  return estimate_output_memory(a.alpha, a.sparsity_pct, b.alpha, b.sparsity_pct);
}

/// Device bytes the resident operand occupies: all three arrays.
inline std::uint64_t estimate_b_memory(const MatrixStats& b) {
  return b.alpha + b.pointer_bytes + b.id_bytes;
}

/// Device memory cost of a row block holding k rows and q stored elements:
/// (k+1) pointer entries plus q (index,value) pairs. Equals the byte_size of
/// the equivalent standalone CSR matrix.
inline std::uint64_t calc_mem(std::uint64_t k, std::uint64_t q, ElementSizes s = {}) {
  return (k + 1) * s.index_bytes + q * (s.index_bytes + s.value_bytes);
}

/// Per-array block byte budget p plus the total row-block budget m_a left
/// after the output reservation and the resident operand are carved out.
struct BlockBudget {
  std::uint64_t p = 0;    // floor(m_a / 3)
  std::uint64_t m_a = 0;  // device_total - m_c - m_b
};

inline BlockBudget block_budget(const MemoryBudget& budget, std::uint64_t m_c,
                                std::uint64_t m_b) {
  if (budget.device_total <= m_c + m_b)
    fail(errc::insufficient_device_memory,
         "device budget " + std::to_string(budget.device_total) +
             " cannot hold operand " + std::to_string(m_b) +
             " plus output reservation " + std::to_string(m_c));
  BlockBudget bb;
  bb.m_a = budget.device_total - m_c - m_b;
  bb.p = bb.m_a / 3;
  return bb;
}

}  // namespace aires

#endif  // AIRES_MEMORY_MODEL_HPP
