#include "aires/partition.hpp"

#include <gtest/gtest.h>

#include <random>

namespace aires {
namespace {

CsrMatrix from_triplets(std::vector<index_t> rows, std::vector<index_t> cols,
                        std::vector<value_t> vals, index_t n_rows, index_t n_cols) {
  return csr_from_triplets(rows, cols, vals, n_rows, n_cols);
}

// 4 rows with nnz [2,3,1,3].
CsrMatrix four_row_example() {
  return from_triplets({0, 0, 1, 1, 1, 2, 3, 3, 3}, {0, 1, 0, 1, 2, 3, 1, 2, 3},
                       {1, 2, 3, 4, 5, 6, 7, 8, 9}, 4, 4);
}

CsrMatrix random_matrix(std::mt19937_64& rng, index_t max_dim = 12) {
  index_t nr = 1 + rng() % max_dim, nc = 1 + rng() % max_dim;
  std::vector<index_t> rr, cc;
  std::vector<value_t> vv;
  for (index_t i = 0; i < nr; i++)
    for (index_t j = 0; j < nc; j++)
      if (rng() % 3 == 0) {
        rr.push_back(i);
        cc.push_back(j);
        vv.push_back(1.0 + static_cast<double>((i * nc + j) % 9));
      }
  return csr_from_triplets(rr, cc, vv, nr, nc);
}

CsrMatrix reconstruct(const std::vector<RobwSegment>& segs, index_t n_rows, index_t n_cols) {
  CsrMatrix a;
  a.n_rows = n_rows;
  a.n_cols = n_cols;
  a.row_ptr.assign(n_rows + 1, 0);
  for (const RobwSegment& seg : segs) {
    for (index_t r = 0; r < seg.rows(); r++)
      a.row_ptr[seg.start_row + r + 1] =
          a.row_ptr[seg.start_row] + seg.row_ptr_local[r + 1];
    a.col_idx.insert(a.col_idx.end(), seg.col_idx.begin(), seg.col_idx.end());
    a.values.insert(a.values.end(), seg.values.begin(), seg.values.end());
  }
  return a;
}

TEST(Robw, HandTracedFourRowExample) {
  CsrMatrix a = four_row_example();
  std::vector<RobwSegment> segs = robw_partition(a, 120, ElementSizes{});
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].start_row, 0u);
  EXPECT_EQ(segs[0].end_row, 2u);
  EXPECT_EQ(segs[0].byte_size, 104u);  // calc_mem(2,5)
  EXPECT_EQ(segs[1].start_row, 2u);
  EXPECT_EQ(segs[1].end_row, 4u);
  EXPECT_EQ(segs[1].byte_size, 88u);  // calc_mem(2,4)
  for (const RobwSegment& seg : segs) EXPECT_LE(seg.byte_size, 120u);
  EXPECT_EQ(reconstruct(segs, 4, 4), a);
}

TEST(Robw, SegmentsAreMaximal) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 60; it++) {
    CsrMatrix a = random_matrix(rng);
    std::uint64_t need = 0;
    for (index_t r = 0; r < a.n_rows; r++)
      need = std::max(need, calc_mem(1, a.row_ptr[r + 1] - a.row_ptr[r]));
    std::uint64_t m_a = need + rng() % 200;
    std::vector<RobwSegment> segs = robw_partition(a, m_a);
    EXPECT_EQ(reconstruct(segs, a.n_rows, a.n_cols), a);
    for (std::size_t i = 0; i < segs.size(); i++) {
      EXPECT_LE(segs[i].byte_size, m_a);
      EXPECT_EQ(segs[i].seg_index, i);
      if (i + 1 < segs.size()) {
        EXPECT_EQ(segs[i].end_row, segs[i + 1].start_row);
        // greedy maximality: the next segment's first row cannot be admitted
        index_t next = segs[i].end_row;
        std::uint64_t rn = a.row_ptr[next + 1] - a.row_ptr[next];
        EXPECT_GT(calc_mem(segs[i].rows() + 1, segs[i].nnz() + rn), m_a);
      }
    }
    EXPECT_EQ(segs.front().start_row, 0u);
    EXPECT_EQ(segs.back().end_row, a.n_rows);
  }
}

TEST(Robw, OversizedRowThrows) {
  CsrMatrix a = four_row_example();
  // row 1 holds 3 nnz: calc_mem(1,3) = 16 + 48 = 64
  EXPECT_THROW(robw_partition(a, 63), error);
  EXPECT_NO_THROW(robw_partition(a, 64));
}

// Three rows of two 16-byte element pairs each: rows at [0,32), [32,64), [64,96).
CsrMatrix three_uniform_rows() {
  return from_triplets({0, 0, 1, 1, 2, 2}, {0, 1, 0, 1, 0, 1}, {1, 2, 3, 4, 5, 6}, 3, 2);
}

TEST(MaxMemoryTiling, HandTracedUnalignedCut) {
  CsrMatrix a = three_uniform_rows();
  std::vector<RawSegment> tiles = maxmemory_partition(a, 40);
  ASSERT_EQ(tiles.size(), 3u);

  EXPECT_EQ(tiles[0].begin_byte, 0u);
  EXPECT_EQ(tiles[0].end_byte, 40u);
  EXPECT_TRUE(tiles[0].leading_partial.empty());
  EXPECT_EQ(tiles[0].begin_row, 0u);
  EXPECT_EQ(tiles[0].end_row, 1u);
  EXPECT_EQ(tiles[0].trailing_partial, (StreamFragment{32, 40}));

  EXPECT_EQ(tiles[1].leading_partial, (StreamFragment{40, 64}));
  EXPECT_EQ(tiles[1].begin_row, 2u);  // row 1 completes only through the merge path
  EXPECT_EQ(tiles[1].end_row, 2u);
  EXPECT_EQ(tiles[1].trailing_partial, (StreamFragment{64, 80}));

  EXPECT_EQ(tiles[2].leading_partial, (StreamFragment{80, 96}));
  EXPECT_EQ(tiles[2].begin_row, 3u);
  EXPECT_EQ(tiles[2].end_row, 3u);
  EXPECT_TRUE(tiles[2].trailing_partial.empty());
}

TEST(MaxMemoryTiling, AlignedCutLeavesNoFragments) {
  CsrMatrix a = three_uniform_rows();
  std::vector<RawSegment> tiles = maxmemory_partition(a, 32);
  ASSERT_EQ(tiles.size(), 3u);
  for (index_t i = 0; i < 3; i++) {
    EXPECT_TRUE(tiles[i].leading_partial.empty());
    EXPECT_TRUE(tiles[i].trailing_partial.empty());
    EXPECT_EQ(tiles[i].begin_row, i);
    EXPECT_EQ(tiles[i].end_row, i + 1);
  }
  EXPECT_EQ(planned_merge_bytes(a, 32), 0u);
}

TEST(MaxMemoryTiling, RowSpanningManyTiles) {
  // one row of 6 elements = 96 bytes, tiled at 25
  CsrMatrix a =
      from_triplets({0, 0, 0, 0, 0, 0}, {0, 1, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 6}, 1, 6);
  std::vector<RawSegment> tiles = maxmemory_partition(a, 25);
  ASSERT_EQ(tiles.size(), 4u);
  for (int i = 0; i < 3; i++) EXPECT_EQ(tiles[i].rows(), 0u);
  // every tile after the first re-ships everything before it
  EXPECT_EQ(tiles[1].trailing_partial, (StreamFragment{0, 50}));
  EXPECT_EQ(tiles[2].trailing_partial, (StreamFragment{0, 75}));
  EXPECT_EQ(tiles[3].trailing_partial.empty(), true);
  EXPECT_EQ(planned_merge_bytes(a, 25), 25u + 50 + 75);
}

TEST(MaxMemoryTiling, MergedCascadeCoversAllRows) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 80; it++) {
    CsrMatrix a = random_matrix(rng);
    if (stream_bytes(a) == 0) continue;
    std::uint64_t m_a = 1 + rng() % (stream_bytes(a) + 8);
    std::uint64_t merge = 0;
    StreamFragment pending{0, 0};
    index_t covered = 0;
    for (const RawSegment& tile : maxmemory_partition(a, m_a)) {
      RawSegment seg = merge_partial(pending, tile, a, merge);
      EXPECT_EQ(seg.begin_row, covered < a.n_rows ? covered : a.n_rows);
      covered = seg.end_row;
      pending = seg.trailing_partial;
    }
    EXPECT_TRUE(pending.empty());
    EXPECT_EQ(covered, a.n_rows);
    EXPECT_EQ(merge, planned_merge_bytes(a, m_a));
  }
}

TEST(MergePartial, EmptyFragmentIsIdentity) {
  CsrMatrix a = three_uniform_rows();
  std::vector<RawSegment> tiles = maxmemory_partition(a, 32);
  std::uint64_t merge = 0;
  RawSegment out = merge_partial(StreamFragment{32, 32}, tiles[1], a, merge);
  EXPECT_EQ(out, tiles[1]);
  EXPECT_EQ(merge, 0u);
}

TEST(MergePartial, RejectsNonAdjacentFragments) {
  CsrMatrix a = three_uniform_rows();
  std::vector<RawSegment> tiles = maxmemory_partition(a, 40);
  std::uint64_t merge = 0;
  try {
    merge_partial(StreamFragment{10, 20}, tiles[1], a, merge);
    FAIL() << "expected non-adjacent failure";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_adjacent_fragments);
  }
}

TEST(MergeBytes, DivisorChainMonotoneUnderShrinking) {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 40; it++) {
    CsrMatrix a = random_matrix(rng);
    std::uint64_t total = stream_bytes(a);
    if (total == 0) continue;
    std::uint64_t base = 1;
    while (base < total) base *= 2;
    std::uint64_t prev_bytes = 0;
    bool first = true;
    for (std::uint64_t m_a = base; m_a >= 8; m_a /= 2) {
      std::uint64_t cur = planned_merge_bytes(a, m_a);
      if (!first) EXPECT_GE(cur, prev_bytes) << "budget " << m_a;
      prev_bytes = cur;
      first = false;
    }
  }
}

TEST(SegmentTransferBytes, AddsPointerArray) {
  CsrMatrix a = three_uniform_rows();
  std::vector<RawSegment> tiles = maxmemory_partition(a, 32);
  EXPECT_EQ(segment_transfer_bytes(tiles[0]), 32u + 2 * 8);
}

}  // namespace
}  // namespace aires
