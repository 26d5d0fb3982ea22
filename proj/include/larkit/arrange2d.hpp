#pragma once

#include <map>
#include <vector>

#include "larkit/geom.hpp"
#include "larkit/lar.hpp"
#include "larkit/operators.hpp"
#include "larkit/sparse.hpp"

namespace larkit {

inline constexpr double kDefaultEps = 1e-8;

// Line segments in the plane; not required to form a complex.
struct SegmentSoup {
  Geometry geometry;  // dim 2
  CellTable edges;    // dim 1
};

// Regularized arrangement of the plane. Faces are columns of boundary_2;
// exterior cycles (one per root component) are retained and flagged.
struct PlanarArrangement {
  Geometry geometry;
  CellTable edges;
  SignedSparseMatrix boundary_2;  // edges x faces, exterior included
  CellTable faces;                // per column, vertices of the face
  // Oriented vertex loops per face (outer first, then holes).
  std::vector<std::vector<std::vector<int>>> face_loops;
  std::vector<int> exterior_faces;  // column indices of exterior cycles
  std::vector<int> face_component;  // connected component per face

  bool is_exterior(int face) const;
  int interior_face_count() const;
};

SegmentSoup fragment_segments(const SegmentSoup& soup, double eps);

struct MergeVerticesResult {
  Geometry geometry;
  std::map<int, CellTable> tables;
  std::vector<int> vertex_map;  // old vertex index -> new vertex index
};

MergeVerticesResult merge_vertices(const Geometry& geometry,
                                   const std::map<int, CellTable>& tables,
                                   double eps);

// Keeps only edges inside biconnected components with >= 2 edges
// (bridges and dangling trees are dropped).
CellTable biconnected_filter(const Geometry& geometry, const CellTable& edges);

PlanarArrangement planar_arrangement(const SegmentSoup& soup, double eps);

// Chains signed edges into oriented vertex loops.
std::vector<std::vector<int>> chain_edge_loops(
    const std::vector<SignedCell>& cycle, const CellTable& edges);

// Signed edge entries of one boundary column.
std::vector<SignedCell> column_cells(const SignedSparseMatrix& m, int col);

// A point strictly inside a face given by its loops (holes included).
Vec2 face_interior_point(const std::vector<std::vector<Vec2>>& loops);

// Point classification against an oriented edge cycle of the arrangement.
PointClass classify_point(const Vec2& point,
                          const std::vector<SignedCell>& cycle,
                          const CellTable& edges, const Geometry& geometry,
                          double eps);

// Keeps the faces whose interior classifies inside (or on) the region
// bounded by sigma's loops; unused edges and vertices are dropped.
PlanarArrangement restrict_to_face(const PlanarArrangement& arr,
                                   const std::vector<std::vector<Vec2>>& sigma,
                                   double eps);

}  // namespace larkit
