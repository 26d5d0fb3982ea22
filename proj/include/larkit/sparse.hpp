#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace larkit {

// Compressed-sparse-column matrix with entries in int8 range.
// Canonical form: within each column row indices strictly increase,
// no stored zeros. Immutable after construction.
struct SignedSparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> col_ptr{0};  // length ncols+1
  std::vector<int> row_idx;
  std::vector<std::int8_t> vals;

  SignedSparseMatrix() = default;
  SignedSparseMatrix(int rows, int cols)
      : nrows(rows), ncols(cols), col_ptr(static_cast<size_t>(cols) + 1, 0) {}

  static SignedSparseMatrix from_triplets(std::span<const int> rows,
                                          std::span<const int> cols,
                                          std::span<const int> values,
                                          int nrows, int ncols);

  int nnz() const { return static_cast<int>(row_idx.size()); }
  bool empty() const { return row_idx.empty(); }

  // O(log nnz(col)) lookup, 0 when absent.
  int at(int row, int col) const;

  SignedSparseMatrix transposed() const;

  bool operator==(const SignedSparseMatrix& other) const = default;
};

SignedSparseMatrix multiply(const SignedSparseMatrix& a,
                            const SignedSparseMatrix& b);

// Sparse signed combination of p-cells.
struct Chain {
  int dim = 0;
  int length = 0;                             // number of p-cells
  std::vector<std::pair<int, int>> entries;   // (cell, coefficient), sorted

  static Chain singleton(int dim, int length, int cell, int coeff);
  bool is_zero() const { return entries.empty(); }
  int coeff(int cell) const;
};

Chain apply(const SignedSparseMatrix& m, const Chain& c);

// Matrix Market coordinate integer exchange, 1-based indices.
void save_mtx(const SignedSparseMatrix& m, std::ostream& out);
void save_mtx(const SignedSparseMatrix& m, const std::string& path);
SignedSparseMatrix load_mtx(std::istream& in);
SignedSparseMatrix load_mtx_file(const std::string& path);

}  // namespace larkit
