#include "larkit/sparse.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace larkit {

namespace {

std::int8_t narrow_checked(long long v) {
  if (v < -127 || v > 127)
    throw std::overflow_error("sparse entry " + std::to_string(v) +
                              " exceeds int8 range");
  return static_cast<std::int8_t>(v);
}

}  // namespace

SignedSparseMatrix SignedSparseMatrix::from_triplets(
    std::span<const int> rows, std::span<const int> cols,
    std::span<const int> values, int nrows, int ncols) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    throw std::invalid_argument("from_triplets: length mismatch");
  const size_t n = rows.size();
  for (size_t k = 0; k < n; ++k) {
    if (rows[k] < 0 || rows[k] >= nrows || cols[k] < 0 || cols[k] >= ncols)
      throw std::out_of_range("from_triplets: index out of range");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (cols[a] != cols[b]) return cols[a] < cols[b];
    return rows[a] < rows[b];
  });

  SignedSparseMatrix m(nrows, ncols);
  size_t k = 0;
  for (int j = 0; j < ncols; ++j) {
    while (k < n && cols[order[k]] == j) {
      const int r = rows[order[k]];
      long long sum = 0;
      while (k < n && cols[order[k]] == j && rows[order[k]] == r)
        sum += values[order[k++]];
      if (sum != 0) {
        m.row_idx.push_back(r);
        m.vals.push_back(narrow_checked(sum));
      }
    }
    m.col_ptr[static_cast<size_t>(j) + 1] = static_cast<int>(m.row_idx.size());
  }
  return m;
}

int SignedSparseMatrix::at(int row, int col) const {
  if (row < 0 || row >= nrows || col < 0 || col >= ncols)
    throw std::out_of_range("at: index out of range");
  const auto begin = row_idx.begin() + col_ptr[col];
  const auto end = row_idx.begin() + col_ptr[static_cast<size_t>(col) + 1];
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return 0;
  return vals[static_cast<size_t>(it - row_idx.begin())];
}

SignedSparseMatrix SignedSparseMatrix::transposed() const {
  SignedSparseMatrix t(ncols, nrows);
  t.row_idx.resize(row_idx.size());
  t.vals.resize(vals.size());
  std::vector<int> count(static_cast<size_t>(nrows) + 1, 0);
  for (int r : row_idx) ++count[static_cast<size_t>(r) + 1];
  std::partial_sum(count.begin(), count.end(), t.col_ptr.begin());
  std::vector<int> next(t.col_ptr.begin(), t.col_ptr.end() - 1);
  for (int j = 0; j < ncols; ++j) {
    for (int k = col_ptr[j]; k < col_ptr[static_cast<size_t>(j) + 1]; ++k) {
      const int pos = next[static_cast<size_t>(row_idx[k])]++;
      t.row_idx[static_cast<size_t>(pos)] = j;
      t.vals[static_cast<size_t>(pos)] = vals[static_cast<size_t>(k)];
    }
  }
  return t;
}

SignedSparseMatrix multiply(const SignedSparseMatrix& a,
                            const SignedSparseMatrix& b) {
  if (a.ncols != b.nrows)
    throw std::invalid_argument("multiply: dimension mismatch");
  SignedSparseMatrix c(a.nrows, b.ncols);
  // Gustavson column-at-a-time with a dense wide accumulator.
  std::vector<long long> acc(static_cast<size_t>(a.nrows), 0);
  std::vector<int> touched;
  for (int j = 0; j < b.ncols; ++j) {
    touched.clear();
    for (int kb = b.col_ptr[j]; kb < b.col_ptr[static_cast<size_t>(j) + 1];
         ++kb) {
      const int k = b.row_idx[kb];
      const long long bv = b.vals[kb];
      for (int ka = a.col_ptr[k]; ka < a.col_ptr[static_cast<size_t>(k) + 1];
           ++ka) {
        const int i = a.row_idx[ka];
        if (acc[i] == 0 && a.vals[ka] != 0) touched.push_back(i);
        acc[i] += bv * a.vals[ka];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int i : touched) {
      if (acc[i] != 0) {
        c.row_idx.push_back(i);
        c.vals.push_back(narrow_checked(acc[i]));
      }
      acc[i] = 0;
    }
    c.col_ptr[static_cast<size_t>(j) + 1] = static_cast<int>(c.row_idx.size());
  }
  return c;
}

Chain Chain::singleton(int dim, int length, int cell, int coeff) {
  Chain c;
  c.dim = dim;
  c.length = length;
  if (cell < 0 || cell >= length)
    throw std::out_of_range("Chain: cell index out of range");
  if (coeff != 0) c.entries.emplace_back(cell, coeff);
  return c;
}

int Chain::coeff(int cell) const {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), cell,
      [](const std::pair<int, int>& e, int c) { return e.first < c; });
  if (it == entries.end() || it->first != cell) return 0;
  return it->second;
}

Chain apply(const SignedSparseMatrix& m, const Chain& c) {
  if (c.length != m.ncols)
    throw std::invalid_argument("apply: dimension mismatch");
  std::vector<long long> acc(static_cast<size_t>(m.nrows), 0);
  for (const auto& [cell, coeff] : c.entries) {
    for (int k = m.col_ptr[cell];
         k < m.col_ptr[static_cast<size_t>(cell) + 1]; ++k)
      acc[static_cast<size_t>(m.row_idx[k])] +=
          static_cast<long long>(coeff) * m.vals[k];
  }
  Chain out;
  out.dim = c.dim - 1;
  out.length = m.nrows;
  for (int i = 0; i < m.nrows; ++i)
    if (acc[i] != 0) out.entries.emplace_back(i, static_cast<int>(acc[i]));
  return out;
}

void save_mtx(const SignedSparseMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate integer general\n";
  out << m.nrows << ' ' << m.ncols << ' ' << m.nnz() << '\n';
  for (int j = 0; j < m.ncols; ++j)
    for (int k = m.col_ptr[j]; k < m.col_ptr[static_cast<size_t>(j) + 1]; ++k)
      out << m.row_idx[k] + 1 << ' ' << j + 1 << ' '
          << static_cast<int>(m.vals[k]) << '\n';
}

void save_mtx(const SignedSparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  save_mtx(m, out);
}

SignedSparseMatrix load_mtx(std::istream& in) {
  std::string line;
  long nrows = -1, ncols = -1, nnz = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream hdr(line);
    if (!(hdr >> nrows >> ncols >> nnz))
      throw std::runtime_error("mtx: malformed size line");
    break;
  }
  if (nrows < 0) throw std::runtime_error("mtx: missing size line");
  std::vector<int> rows, cols, vals;
  rows.reserve(nnz);
  cols.reserve(nnz);
  vals.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    int r, c, v;
    if (!(in >> r >> c >> v)) throw std::runtime_error("mtx: truncated data");
    rows.push_back(r - 1);
    cols.push_back(c - 1);
    vals.push_back(v);
  }
  return SignedSparseMatrix::from_triplets(rows, cols, vals,
                                           static_cast<int>(nrows),
                                           static_cast<int>(ncols));
}

SignedSparseMatrix load_mtx_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_mtx(in);
}

}  // namespace larkit
