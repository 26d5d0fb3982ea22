#pragma once

#include <vector>

#include "larkit/geom.hpp"
#include "larkit/lar.hpp"
#include "larkit/operators.hpp"
#include "larkit/sparse.hpp"

namespace larkit {

// A closed, congruent (d-1)-skeleton from which the d-cells are
// extracted. For d = 2 the facets are edges and hinges are vertices;
// for d = 3 the facets are faces (with oriented vertex loops) and
// hinges are edges.
struct Skeleton {
  int dim = 0;  // d, dimension of the cells to extract
  Geometry geometry;
  SignedSparseMatrix boundary;  // boundary_{d-1}: hinges x facets
  CellTable facets;             // (d-1)-cells by vertices
  CellTable hinges;             // (d-2)-cells by vertices (empty for d=2)
  // d = 3 only: per facet, the oriented vertex loops of its +1
  // orientation (first loop is the outer one, extra loops are holes).
  std::vector<std::vector<std::vector<int>>> facet_loops;

  int facet_count() const { return facets.size(); }
  int hinge_count() const { return boundary.nrows; }
};

Skeleton make_skeleton_2d(Geometry geometry, CellTable edges);

// Face loops are recovered by chaining each boundary_2 column.
Skeleton make_skeleton_3d(Geometry geometry, CellTable edges,
                          CellTable faces, SignedSparseMatrix boundary_2);

// Facets incident to one hinge, sorted by angle around it.
struct PetalFan {
  int hinge = 0;
  std::vector<int> petals;     // facet indices in cyclic angular order
  std::vector<double> angles;  // radians, strictly increasing
};

PetalFan petal_fan(const Skeleton& skeleton, int hinge);

// The petal adjacent to `current` in the fan's cyclic order, on the side
// selected by the orientation of `current` at the hinge, signed so the
// hinge cancels in the boundary sum.
SignedCell next_petal(const Skeleton& skeleton, const PetalFan& fan,
                      SignedCell current);

Chain extract_cycle(const Skeleton& skeleton, SignedCell seed);

// Signed area (d=2, shoelace) or signed volume (d=3, divergence theorem)
// of a closed (d-1)-cycle.
double signed_measure(const Chain& cycle, const Skeleton& skeleton);

struct TgwResult {
  // facets x cycles, every extracted cycle as a column, exteriors kept.
  SignedSparseMatrix boundary;
  std::vector<double> measures;        // signed measure per cycle
  std::vector<int> component;          // connected component per cycle
  std::vector<int> exterior_cycles;    // cycles with negative measure
  int component_count = 0;
};

// Runs seeds over all unconsumed orientations until each facet has been
// used exactly once per orientation.
TgwResult extract_all_cells(const Skeleton& skeleton);

}  // namespace larkit
