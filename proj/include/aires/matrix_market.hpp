#ifndef AIRES_MATRIX_MARKET_HPP
#define AIRES_MATRIX_MARKET_HPP

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aires/sparse.hpp"

namespace aires {

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

/// Reads a Matrix Market coordinate stream. Supported banners: field in
/// {real, integer, pattern}, symmetry in {general, symmetric}. Symmetric
/// input is expanded (off-diagonal entries mirrored); pattern entries get
/// value 1.0. Indices are 1-based in the file. Parse errors carry the
/// offending line number.
inline CsrMatrix read_matrix_market(std::istream& in) {
  std::uint64_t lineno = 0;
  auto bad = [&](errc code, const std::string& what) {
    fail(code, "line " + std::to_string(lineno) + ": " + what);
  };

  std::string banner;
  lineno++;
  if (!std::getline(in, banner)) bad(errc::parse_error, "empty matrix market stream");
  std::istringstream bs(banner);
  std::string head, object, format, field, symmetry;
  bs >> head >> object >> format >> field >> symmetry;
  if (head != "%%MatrixMarket") bad(errc::parse_error, "missing %%MatrixMarket banner");
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    bad(errc::unsupported_format, "only coordinate matrices are supported");
  bool pattern = field == "pattern";
  if (field != "real" && field != "integer" && !pattern)
    bad(errc::unsupported_format, "unsupported field: " + field);
  bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !symmetric)
    bad(errc::unsupported_format, "unsupported symmetry: " + symmetry);

  std::string line;
  index_t n_rows = 0, n_cols = 0;
  std::uint64_t n_entries = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> n_rows >> n_cols >> n_entries))
      bad(errc::parse_error, "bad size line: " + line);
    have_size = true;
    break;
  }
  if (!have_size) bad(errc::parse_error, "missing size line");

  std::vector<index_t> rows, cols;
  std::vector<value_t> vals;
  rows.reserve(n_entries);
  cols.reserve(n_entries);
  vals.reserve(n_entries);

  std::uint64_t seen = 0;
  while (seen < n_entries) {
    if (!std::getline(in, line)) bad(errc::parse_error, "unexpected end of entries");
    lineno++;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    std::istringstream ls(line);
    std::uint64_t r1 = 0, c1 = 0;
    value_t v = 1.0;
    if (!(ls >> r1 >> c1)) bad(errc::parse_error, "bad entry line: " + line);
    if (!pattern && !(ls >> v)) bad(errc::parse_error, "missing value: " + line);
    if (r1 == 0 || c1 == 0 || r1 > n_rows || c1 > n_cols)
      bad(errc::parse_error, "entry index out of bounds: " + line);
    rows.push_back(r1 - 1);
    cols.push_back(c1 - 1);
    vals.push_back(v);
    if (symmetric && r1 != c1) {
      rows.push_back(c1 - 1);
      cols.push_back(r1 - 1);
      vals.push_back(v);
    }
    seen++;
  }
  return csr_from_triplets(rows, cols, vals, n_rows, n_cols);
}

inline CsrMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return read_matrix_market(in);
}

/// Writes coordinate real general with 1-based indices.
inline void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n_rows << " " << a.n_cols << " " << a.nnz() << "\n";
  char buf[64];
  for (index_t r = 0; r < a.n_rows; r++) {
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; k++) {
      std::snprintf(buf, sizeof buf, "%" PRIu64 " %" PRIu64 " %.17g\n", r + 1,
                    a.col_idx[k] + 1, a.values[k]);
      out << buf;
    }
  }
}

inline void write_matrix_market_file(const std::string& path, const CsrMatrix& a) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
  write_matrix_market(out, a);
}

}  // namespace aires

#endif  // AIRES_MATRIX_MARKET_HPP
