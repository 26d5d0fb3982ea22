#include "larkit/operators.hpp"

#include <stdexcept>
#include <string>

namespace larkit {

SignedSparseMatrix boundary_1(const CellTable& edges, int nverts) {
  std::vector<int> rows, cols, vals;
  rows.reserve(2 * edges.cells.size());
  cols.reserve(2 * edges.cells.size());
  vals.reserve(2 * edges.cells.size());
  for (int e = 0; e < edges.size(); ++e) {
    const auto& ev = edges.cells[static_cast<size_t>(e)];
    if (ev.size() != 2 || ev[0] == ev[1])
      throw std::invalid_argument("boundary_1: degenerate edge " +
                                  std::to_string(e));
    rows.push_back(ev[0]);
    cols.push_back(e);
    vals.push_back(-1);
    rows.push_back(ev[1]);
    cols.push_back(e);
    vals.push_back(+1);
  }
  return SignedSparseMatrix::from_triplets(rows, cols, vals, nverts,
                                           edges.size());
}

SignedSparseMatrix boundary_2_from_cycles(
    const std::vector<std::vector<SignedCell>>& face_cycles, int nedges,
    const SignedSparseMatrix* check_d1) {
  std::vector<int> rows, cols, vals;
  for (size_t f = 0; f < face_cycles.size(); ++f) {
    for (const auto& [edge, sign] : face_cycles[f]) {
      if (edge < 0 || edge >= nedges)
        throw std::out_of_range("boundary_2_from_cycles: edge out of range");
      rows.push_back(edge);
      cols.push_back(static_cast<int>(f));
      vals.push_back(sign);
    }
  }
  auto d2 = SignedSparseMatrix::from_triplets(
      rows, cols, vals, nedges, static_cast<int>(face_cycles.size()));
  if (check_d1 != nullptr) {
    const auto residual = multiply(*check_d1, d2);
    if (!residual.empty()) {
      int bad = 0;
      while (residual.col_ptr[static_cast<size_t>(bad) + 1] ==
             residual.col_ptr[static_cast<size_t>(bad)])
        ++bad;
      throw std::invalid_argument(
          "boundary_2_from_cycles: non-closed face cycle (column " +
          std::to_string(bad) + ")");
    }
  }
  return d2;
}

SignedSparseMatrix coboundary(const SignedSparseMatrix& p_boundary) {
  return p_boundary.transposed();
}

SignedSparseMatrix incidence(const SignedSparseMatrix& mp,
                             const SignedSparseMatrix& mq, int threshold) {
  if (mp.ncols != mq.ncols)
    throw std::invalid_argument("incidence: vertex-count mismatch");
  auto product = multiply(mp, mq.transposed());
  // Prune entries below the caller's shared-vertex threshold.
  SignedSparseMatrix out(product.nrows, product.ncols);
  for (int j = 0; j < product.ncols; ++j) {
    for (int k = product.col_ptr[j];
         k < product.col_ptr[static_cast<size_t>(j) + 1]; ++k) {
      if (product.vals[static_cast<size_t>(k)] >= threshold) {
        out.row_idx.push_back(product.row_idx[static_cast<size_t>(k)]);
        out.vals.push_back(product.vals[static_cast<size_t>(k)]);
      }
    }
    out.col_ptr[static_cast<size_t>(j) + 1] =
        static_cast<int>(out.row_idx.size());
  }
  return out;
}

}  // namespace larkit
