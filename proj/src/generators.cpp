#include "larkit/generators.hpp"

#include <random>
#include <stdexcept>

namespace larkit {

Complex cuboidal_grid(const GridSpec& spec) {
  const auto [nx, ny, nz] = spec.shape;
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("cuboidal_grid: counts must be >= 1");
  const double s = spec.cell_size;

  Complex grid;
  grid.geometry.dim = 3;
  const auto vid = [&](int i, int j, int k) {
    return i + (nx + 1) * (j + (ny + 1) * k);
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        grid.geometry.coords.push_back({s * i, s * j, s * k});

  CellTable edges{1, {}};
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        if (i < nx) edges.cells.push_back({vid(i, j, k), vid(i + 1, j, k)});
        if (j < ny) edges.cells.push_back({vid(i, j, k), vid(i, j + 1, k)});
        if (k < nz) edges.cells.push_back({vid(i, j, k), vid(i, j, k + 1)});
      }

  CellTable faces{2, {}};
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        if (i < nx && j < ny)
          faces.cells.push_back({vid(i, j, k), vid(i + 1, j, k),
                                 vid(i, j + 1, k), vid(i + 1, j + 1, k)});
        if (i < nx && k < nz)
          faces.cells.push_back({vid(i, j, k), vid(i + 1, j, k),
                                 vid(i, j, k + 1), vid(i + 1, j, k + 1)});
        if (j < ny && k < nz)
          faces.cells.push_back({vid(i, j, k), vid(i, j + 1, k),
                                 vid(i, j, k + 1), vid(i, j + 1, k + 1)});
      }

  CellTable cells{3, {}};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        cells.cells.push_back({vid(i, j, k), vid(i + 1, j, k),
                               vid(i, j + 1, k), vid(i + 1, j + 1, k),
                               vid(i, j, k + 1), vid(i + 1, j, k + 1),
                               vid(i, j + 1, k + 1), vid(i + 1, j + 1, k + 1)});

  grid.tables[1] = std::move(edges);
  grid.tables[2] = std::move(faces);
  grid.tables[3] = std::move(cells);
  return grid;
}

Geometry transform(const Geometry& geometry, double rx, double ry, double rz,
                   const Vec3& translation) {
  Geometry out = geometry;
  for (auto& p : out.coords) {
    if (geometry.dim == 3) {
      const Vec3 q =
          rigid_transform({p[0], p[1], p[2]}, rx, ry, rz, translation);
      p = {q[0], q[1], q[2]};
    } else {
      const double c = std::cos(rz), s = std::sin(rz);
      p = {c * p[0] - s * p[1] + translation[0],
           s * p[0] + c * p[1] + translation[1]};
    }
  }
  return out;
}

Geometry center_on_centroid(const Geometry& geometry) {
  Geometry out = geometry;
  if (geometry.coords.empty()) return out;
  std::vector<double> c(static_cast<size_t>(geometry.dim), 0.0);
  for (const auto& p : geometry.coords)
    for (int k = 0; k < geometry.dim; ++k) c[k] += p[k];
  for (auto& x : c) x /= static_cast<double>(geometry.coords.size());
  for (auto& p : out.coords)
    for (int k = 0; k < geometry.dim; ++k) p[k] -= c[k];
  return out;
}

Complex random_segments(int n, double lo, double hi, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_segments: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(lo, hi);
  Complex soup;
  soup.geometry.dim = 2;
  CellTable edges{1, {}};
  for (int i = 0; i < n; ++i) {
    const int a = soup.geometry.size();
    soup.geometry.coords.push_back({coord(rng), coord(rng)});
    soup.geometry.coords.push_back({coord(rng), coord(rng)});
    edges.cells.push_back({a, a + 1});
  }
  soup.tables[1] = std::move(edges);
  return soup;
}

}  // namespace larkit
