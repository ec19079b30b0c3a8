#ifndef AIRES_GCN_HPP
#define AIRES_GCN_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aires/scheduler.hpp"
#include "aires/sparse.hpp"
#include "aires/spgemm.hpp"

namespace aires {

struct GcnLayerSpec {
  index_t feature_dim = 256;
  double feature_sparsity_pct = 99.0;
  DenseMatrix weight;  // (in_features, out_features)
};

struct NormalizedAdjacency {
  CsrMatrix a_tilde;
};

/// Symmetric normalization with self-loops: with A-hat = A + I and weighted
/// degrees d_i = sum_j A-hat[i][j], every entry becomes
/// A-hat[i][j] / sqrt(d_i * d_j). The division form keeps ratios like
/// 1/sqrt(4) exact.
inline NormalizedAdjacency normalize_adjacency(const CsrMatrix& a) {
  if (a.n_rows != a.n_cols)
    fail(errc::non_square, std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols) +
                               " adjacency is not square");
  for (value_t v : a.values)
    if (v < 0.0) fail(errc::negative_weight, "adjacency weights must be nonnegative");

  index_t n = a.n_rows;
  CsrMatrix ah;
  ah.n_rows = ah.n_cols = n;
  ah.row_ptr.assign(n + 1, 0);
  ah.col_idx.reserve(a.nnz() + n);
  ah.values.reserve(a.nnz() + n);
  for (index_t r = 0; r < n; r++) {
    bool placed = false;
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; k++) {
      index_t c = a.col_idx[k];
      if (!placed && c >= r) {
        ah.col_idx.push_back(r);
        ah.values.push_back(c == r ? a.values[k] + 1.0 : 1.0);
        placed = true;
        if (c == r) continue;
      }
      ah.col_idx.push_back(c);
      ah.values.push_back(a.values[k]);
    }
    if (!placed) {
      ah.col_idx.push_back(r);
      ah.values.push_back(1.0);
    }
    ah.row_ptr[r + 1] = static_cast<index_t>(ah.col_idx.size());
  }

  std::vector<value_t> degree(n, 0.0);
  for (index_t r = 0; r < n; r++)
    for (index_t k = ah.row_ptr[r]; k < ah.row_ptr[r + 1]; k++)
      degree[r] += ah.values[k];

  for (index_t r = 0; r < n; r++)
    for (index_t k = ah.row_ptr[r]; k < ah.row_ptr[r + 1]; k++)
      ah.values[k] = ah.values[k] / std::sqrt(degree[r] * degree[ah.col_idx[k]]);

  return NormalizedAdjacency{std::move(ah)};
}

struct AggregateResult {
  CsrMatrix x;
  RunReport report;
  std::vector<TraceEvent> trace;
};

/// X = A-tilde * H through the out-of-core engine.
inline AggregateResult aggregate(const NormalizedAdjacency& n, const CscMatrix& h,
                                 Strategy strategy, const MemoryBudget& budget,
                                 const SimConfig& cfg) {
  RunResult run = run_strategy(strategy, n.a_tilde, h, budget, cfg);
  return AggregateResult{std::move(run.c), run.report, std::move(run.trace)};
}

/// H' = ReLU(X * W), sparse times dense row-wise, re-sparsified: entries
/// that are negative or exactly zero after the activation are dropped.
inline CsrMatrix combine(const CsrMatrix& x, const DenseMatrix& w) {
  if (x.n_cols != w.n_rows)
    fail(errc::dimension_mismatch, "feature width " + std::to_string(x.n_cols) +
                                       " does not match weight rows " +
                                       std::to_string(w.n_rows));
  CsrMatrix h;
  h.n_rows = x.n_rows;
  h.n_cols = w.n_cols;
  h.row_ptr.assign(x.n_rows + 1, 0);
  std::vector<value_t> acc(w.n_cols);
  for (index_t r = 0; r < x.n_rows; r++) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (index_t k = x.row_ptr[r]; k < x.row_ptr[r + 1]; k++) {
      index_t in = x.col_idx[k];
      value_t v = x.values[k];
      for (index_t j = 0; j < w.n_cols; j++) acc[j] += v * w.at(in, j);
    }
    for (index_t j = 0; j < w.n_cols; j++) {
      if (acc[j] > 0.0) {
        h.col_idx.push_back(j);
        h.values.push_back(acc[j]);
      }
    }
    h.row_ptr[r + 1] = static_cast<index_t>(h.col_idx.size());
  }
  return h;
}

struct LayerResult {
  CsrMatrix h_next;
  RunReport aggregate_report;
  std::vector<TraceEvent> trace;
};

/// One forward layer: normalize, aggregate out-of-core, combine with ReLU.
inline LayerResult layer_forward(const CsrMatrix& a, const CscMatrix& h,
                                 const GcnLayerSpec& spec, Strategy strategy,
                                 const MemoryBudget& budget, const SimConfig& cfg) {
  NormalizedAdjacency n = normalize_adjacency(a);
  AggregateResult agg = aggregate(n, h, strategy, budget, cfg);
  CsrMatrix h_next = combine(agg.x, spec.weight);
  return LayerResult{std::move(h_next), agg.report, std::move(agg.trace)};
}

}  // namespace aires

#endif  // AIRES_GCN_HPP
