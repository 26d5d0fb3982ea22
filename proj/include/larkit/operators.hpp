#pragma once

#include "larkit/lar.hpp"
#include "larkit/sparse.hpp"

namespace larkit {

// Signed edge reference inside a face cycle: edge index plus traversal
// direction (+1 along stored orientation, -1 against it).
struct SignedCell {
  int index = 0;
  int sign = 1;
};

// (nverts x nedges) operator; the column of edge (a, b) holds -1 at the
// tail a and +1 at the head b.
SignedSparseMatrix boundary_1(const CellTable& edges, int nverts);

// (nedges x nfaces) operator from per-face oriented edge cycles. When
// check_d1 is given, every column is verified to be a 1-cycle.
SignedSparseMatrix boundary_2_from_cycles(
    const std::vector<std::vector<SignedCell>>& face_cycles, int nedges,
    const SignedSparseMatrix* check_d1 = nullptr);

// delta_{p-1} = transpose of boundary_p.
SignedSparseMatrix coboundary(const SignedSparseMatrix& p_boundary);

// Mp * Mq^T with entries below threshold zeroed; entry (i, j) counts the
// vertices shared by p-cell i and q-cell j.
SignedSparseMatrix incidence(const SignedSparseMatrix& mp,
                             const SignedSparseMatrix& mq, int threshold);

}  // namespace larkit
