#pragma once

#include <array>
#include <cstdint>

#include "larkit/geom.hpp"
#include "larkit/lar.hpp"

namespace larkit {

struct GridSpec {
  std::array<int, 3> shape{1, 1, 1};  // cell counts per axis
  double cell_size = 1.0;
};

// Axis-aligned cuboidal grid with V, EV, FV, CV tables; vertices in
// lexicographic (x fastest) order.
Complex cuboidal_grid(const GridSpec& spec);

// Rigid placement: rotation about x, then y, then z, then translation.
Geometry transform(const Geometry& geometry, double rx, double ry, double rz,
                   const Vec3& translation);

// Translate so the centroid of the vertex set moves to the origin.
Geometry center_on_centroid(const Geometry& geometry);

// n random segments with endpoints uniform in [lo, hi]^2, reproducible
// from the seed. Returned as a dim-2 complex with an edge table.
Complex random_segments(int n, double lo, double hi, std::uint64_t seed);

}  // namespace larkit
