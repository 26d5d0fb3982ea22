#pragma once

#include <memory>
#include <vector>

#include "larkit/arrange2d.hpp"
#include "larkit/geom.hpp"
#include "larkit/lar.hpp"
#include "larkit/tgw.hpp"

namespace larkit {

// All input facets assembled in one representation; generally not a
// complex since faces may intersect outside their boundaries.
struct FacetSoup {
  Geometry geometry;  // dim 3
  CellTable edges;    // dim 1
  CellTable faces;    // dim 2
  // Oriented vertex loops per face (orientation arbitrary but fixed).
  std::vector<std::vector<std::vector<int>>> face_loops;
  std::vector<int> provenance;  // input complex id per face
};

FacetSoup assemble(const std::vector<Complex>& inputs);

// Per-axis interval trees over face bounding boxes.
class CandidateIndex {
 public:
  static CandidateIndex build(const FacetSoup& soup);

  // Faces whose bounding box intersects the box of `face`, excluding the
  // face itself; sorted ascending.
  std::vector<int> query(int face) const;

 private:
  struct AxisTree;
  std::shared_ptr<const AxisTree> axes_[3];
  int nfaces_ = 0;
};

// Rigid frame mapping the face's supporting plane (total-least-squares
// fit) to z = 0.
PlaneFrame face_frame(const FacetSoup& soup, int face);

// One fragmented input face, lifted back to world coordinates.
struct Fragment {
  std::vector<Vec3> vertices;
  std::vector<std::vector<std::vector<int>>> face_loops;
};

Fragment fragment_face(const FacetSoup& soup,
                       const std::vector<int>& candidates, int face,
                       double eps);

Skeleton skeleton_merge(const std::vector<Fragment>& fragments, double eps);

// Containment forest over the isolated component boundary shells.
struct ShellPoset {
  std::vector<int> shell_cycles;  // TGW cycle index per shell
  std::vector<int> parent;        // index into shells, -1 for roots
  std::vector<int> parity;        // containment depth parity
};

ShellPoset shell_poset(const Skeleton& skeleton, const TgwResult& tgw);

// Extracts the 3-cells, folds contained component shells into their
// enclosing cells as cavities, and assembles the chain complex. The
// boundary_3 operator retains the exterior columns, flagged in
// exterior_cells; tables hold EW / FW / CW for all columns.
ChainComplexResult space_arrangement(const Skeleton& skeleton);

// Full Merge pipeline; `workers` controls facet-fragmentation
// parallelism only and never changes the result.
ChainComplexResult space_arrangement(const std::vector<Complex>& inputs,
                                     double eps, int workers = 1);

}  // namespace larkit
