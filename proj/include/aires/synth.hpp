#ifndef AIRES_SYNTH_HPP
#define AIRES_SYNTH_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aires/error.hpp"
#include "aires/sparse.hpp"

namespace aires {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void check_density(double density) {
  if (!(density > 0.0) || density > 1.0)
    fail(errc::invalid_density, "density must be in (0, 1], got " + std::to_string(density));
}

/// Random symmetric adjacency with unit weights. Each unordered pair (and
/// each diagonal cell) is present with probability `density`, so the
/// expected nnz is density * n^2.
inline CsrMatrix gen_symmetric(index_t n, double density, std::uint64_t seed) {
  check_density(density);
  std::mt19937_64 rng(seed);
  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  for (index_t i = 0; i < n; i++) {
    for (index_t j = i; j < n; j++) {
      if (uniform01(rng) < density) {
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(1.0);
        if (j != i) {
          rows.push_back(j);
          cols.push_back(i);
          vals.push_back(1.0);
        }
      }
    }
  }
  return csr_from_triplets(rows, cols, vals, n, n);
}

/// Random rectangular sparse matrix, values uniform in [lo, hi).
inline CsrMatrix gen_sparse(index_t rows, index_t cols, double density, std::uint64_t seed,
                            double lo = 0.0, double hi = 1.0) {
  check_density(density);
  std::mt19937_64 rng(seed);
  CsrMatrix m;
  m.n_rows = rows;
  m.n_cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  for (index_t i = 0; i < rows; i++) {
    for (index_t j = 0; j < cols; j++) {
      if (uniform01(rng) < density) {
        value_t v = lo + (hi - lo) * uniform01(rng);
        if (v == 0.0) continue;
        m.col_idx.push_back(j);
        m.values.push_back(v);
      }
    }
    m.row_ptr[i + 1] = static_cast<index_t>(m.col_idx.size());
  }
  return m;
}

/// Feature matrix for n_nodes nodes: density is (100 - sparsity_pct) / 100,
/// values in [0.1, 1.0) so aggregation inputs stay positive.
inline CsrMatrix gen_features(index_t n_nodes, index_t dim, double sparsity_pct,
                              std::uint64_t seed) {
  if (sparsity_pct < 0.0 || sparsity_pct >= 100.0)
    fail(errc::invalid_density, "feature sparsity must be in [0, 100)");
  return gen_sparse(n_nodes, dim, (100.0 - sparsity_pct) / 100.0, seed, 0.1, 1.0);
}

/// Dense weight matrix, entries uniform in [-0.5, 0.5).
inline DenseMatrix gen_weights(index_t in_dim, index_t out_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseMatrix w = make_dense(in_dim, out_dim);
  for (value_t& v : w.data) v = uniform01(rng) - 0.5;
  return w;
}

}  // namespace aires

#endif  // AIRES_SYNTH_HPP
