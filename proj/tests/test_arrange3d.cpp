#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "larkit/arrange3d.hpp"
#include "larkit/generators.hpp"
#include "larkit/operators.hpp"

using namespace larkit;

namespace {

Complex two_cubes() {
  Complex c;
  c.geometry.dim = 3;
  for (const auto& p : fixtures::two_cube_vertices)
    c.geometry.coords.push_back({p[0], p[1], p[2]});
  CellTable fv{2, {}};
  for (const auto& f : fixtures::two_cube_faces) {
    std::vector<int> face;
    for (int v : f) face.push_back(v - 1);
    fv.cells.push_back(face);
  }
  c.tables[2] = fv;
  return c;
}

Complex translated_cube(double x, double y, double z, double size = 1.0) {
  Complex c = cuboidal_grid({{1, 1, 1}, size});
  c.geometry = transform(c.geometry, 0, 0, 0, {x, y, z});
  return c;
}

std::vector<Fragment> fragment_all(const FacetSoup& soup, double eps) {
  const CandidateIndex index = CandidateIndex::build(soup);
  std::vector<Fragment> fragments;
  for (int f = 0; f < soup.faces.size(); ++f)
    fragments.push_back(fragment_face(soup, index.query(f), f, eps));
  return fragments;
}

int interior_cell_count(const ChainComplexResult& result) {
  return result.tables.at(3).size() -
         static_cast<int>(result.exterior_cells.size());
}

std::vector<int> interior_cell_sizes(const ChainComplexResult& result) {
  std::vector<int> sizes;
  const auto& cw = result.tables.at(3);
  for (int c = 0; c < cw.size(); ++c) {
    bool exterior = false;
    for (int e : result.exterior_cells) exterior |= e == c;
    if (!exterior)
      sizes.push_back(static_cast<int>(cw.cells[static_cast<size_t>(c)].size()));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace

TEST_CASE("assembling the two-cube fixture") {
  const FacetSoup soup = assemble({two_cubes()});
  CHECK(soup.geometry.size() == 16);
  CHECK(soup.faces.size() == 12);
  CHECK(soup.face_loops.size() == 12);
  for (const auto& loops : soup.face_loops) {
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].size() == 4);
  }
  for (int p : soup.provenance) CHECK(p == 0);
}

TEST_CASE("assembling one complex is the identity, grids concatenate") {
  const Complex grid = cuboidal_grid({{3, 3, 3}, 1.0});
  const FacetSoup one = assemble({grid});
  CHECK(one.faces.size() == 108);
  CHECK(one.geometry.size() == 64);
  const FacetSoup twice = assemble({grid, grid});
  CHECK(twice.faces.size() == 216);
  CHECK(twice.geometry.size() == 128);
  CHECK(twice.provenance.front() == 0);
  CHECK(twice.provenance.back() == 1);
}

TEST_CASE("candidate index equals the quadratic bounding-box oracle") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  FacetSoup soup;
  soup.geometry.dim = 3;
  soup.faces.dim = 2;
  const int n = 200;
  for (int f = 0; f < n; ++f) {
    std::vector<int> face;
    std::vector<std::vector<int>> loop(1);
    for (int k = 0; k < 3; ++k) {
      face.push_back(soup.geometry.size());
      loop[0].push_back(soup.geometry.size());
      soup.geometry.coords.push_back({coord(rng), coord(rng), coord(rng)});
    }
    soup.faces.cells.push_back(face);
    soup.face_loops.push_back(loop);
    soup.provenance.push_back(0);
  }
  const auto bbox = [&](int f) {
    std::array<double, 6> b{1e30, 1e30, 1e30, -1e30, -1e30, -1e30};
    for (int v : soup.faces.cells[static_cast<size_t>(f)])
      for (int k = 0; k < 3; ++k) {
        b[k] = std::min(b[k], soup.geometry.coords[static_cast<size_t>(v)][k]);
        b[k + 3] =
            std::max(b[k + 3], soup.geometry.coords[static_cast<size_t>(v)][k]);
      }
    return b;
  };
  const CandidateIndex index = CandidateIndex::build(soup);
  for (int f = 0; f < n; ++f) {
    std::vector<int> expected;
    const auto bf = bbox(f);
    for (int g = 0; g < n; ++g) {
      if (g == f) continue;
      const auto bg = bbox(g);
      bool overlap = true;
      for (int k = 0; k < 3; ++k)
        overlap &= bf[k] <= bg[k + 3] && bg[k] <= bf[k + 3];
      if (overlap) expected.push_back(g);
    }
    CHECK(index.query(f) == expected);
  }
}

TEST_CASE("distant cubes report no cross-complex candidates") {
  const FacetSoup soup =
      assemble({translated_cube(0, 0, 0), translated_cube(10, 0, 0)});
  const CandidateIndex index = CandidateIndex::build(soup);
  for (int f = 0; f < 6; ++f)
    for (int g : index.query(f)) CHECK(g < 6);
}

TEST_CASE("face frames are rigid maps onto z = 0") {
  const FacetSoup soup = assemble({two_cubes()});
  std::mt19937 rng(5);
  for (int f = 0; f < soup.faces.size(); ++f) {
    const PlaneFrame frame = face_frame(soup, f);
    const auto& face = soup.faces.cells[static_cast<size_t>(f)];
    std::vector<Vec2> mapped;
    for (int v : face) {
      const Vec3 p{soup.geometry.coords[static_cast<size_t>(v)][0],
                   soup.geometry.coords[static_cast<size_t>(v)][1],
                   soup.geometry.coords[static_cast<size_t>(v)][2]};
      CHECK(std::abs(frame.height(p)) < 1e-12);
      mapped.push_back(frame.to_plane(p));
      const Vec3 back = frame.from_plane(mapped.back());
      CHECK(norm(back - p) < 1e-12);
    }
    for (size_t i = 0; i < face.size(); ++i)
      for (size_t j = i + 1; j < face.size(); ++j) {
        const Vec3 pi{soup.geometry.coords[static_cast<size_t>(face[i])][0],
                      soup.geometry.coords[static_cast<size_t>(face[i])][1],
                      soup.geometry.coords[static_cast<size_t>(face[i])][2]};
        const Vec3 pj{soup.geometry.coords[static_cast<size_t>(face[j])][0],
                      soup.geometry.coords[static_cast<size_t>(face[j])][1],
                      soup.geometry.coords[static_cast<size_t>(face[j])][2]};
        CHECK(norm2d(mapped[i] - mapped[j]) ==
              doctest::Approx(norm(pi - pj)).epsilon(1e-9));
      }
  }
}

TEST_CASE("fragmenting the two-cube soup splits the pierced faces") {
  const FacetSoup soup = assemble({two_cubes()});
  const auto fragments = fragment_all(soup, 1e-8);
  int pieces = 0;
  int split_faces = 0;
  for (const auto& frag : fragments) {
    pieces += static_cast<int>(frag.face_loops.size());
    split_faces += frag.face_loops.size() > 1;
  }
  CHECK(pieces == 18);
  CHECK(split_faces == 6);
}

TEST_CASE("fragmenting with no candidates returns the face unchanged") {
  const FacetSoup soup = assemble({translated_cube(0, 0, 0)});
  const Fragment frag = fragment_face(soup, {}, 0, 1e-8);
  REQUIRE(frag.face_loops.size() == 1);
  CHECK(frag.face_loops[0][0].size() == 4);
}

TEST_CASE("skeleton merge of the two-cube fragments") {
  const FacetSoup soup = assemble({two_cubes()});
  const Skeleton skeleton = skeleton_merge(fragment_all(soup, 1e-8), 1e-8);
  CHECK(skeleton.geometry.size() == 22);
  CHECK(skeleton.facet_count() == 18);
  CHECK(skeleton.hinge_count() == 36);
  // Congruence: canonical faces unique, vertices pairwise separated.
  std::set<std::vector<int>> keys(skeleton.facets.cells.begin(),
                                  skeleton.facets.cells.end());
  CHECK(keys.size() == 18);
  for (int a = 0; a < skeleton.geometry.size(); ++a)
    for (int b = a + 1; b < skeleton.geometry.size(); ++b) {
      double d2 = 0;
      for (int k = 0; k < 3; ++k) {
        const double d = skeleton.geometry.coords[static_cast<size_t>(a)][k] -
                         skeleton.geometry.coords[static_cast<size_t>(b)][k];
        d2 += d * d;
      }
      CHECK(d2 > 1e-16);
    }
}

TEST_CASE("abutting cubes share a single wall instance") {
  const auto result = space_arrangement(
      {translated_cube(0, 0, 0), translated_cube(1, 0, 0)}, 1e-8, 1);
  CHECK(result.geometry.size() == 12);
  CHECK(result.tables.at(1).size() == 20);
  CHECK(result.tables.at(2).size() == 11);
  CHECK(interior_cell_count(result) == 2);
}

TEST_CASE("space arrangement of the two-cube fixture") {
  const auto result = space_arrangement({two_cubes()}, 1e-8, 1);
  CHECK(result.geometry.size() == 22);
  CHECK(result.tables.at(1).size() == 36);
  CHECK(result.tables.at(2).size() == 18);
  CHECK(interior_cell_count(result) == 3);
  CHECK(interior_cell_sizes(result) == std::vector<int>{8, 14, 14});
  CHECK(multiply(result.boundary(2), result.boundary(3)).empty());
  CHECK(multiply(result.boundary(1), result.boundary(2)).empty());
  // Each face bounds exactly two cells with opposite orientation.
  const auto& d3 = result.boundary(3);
  std::vector<int> degree(static_cast<size_t>(d3.nrows), 0);
  std::vector<int> sum(static_cast<size_t>(d3.nrows), 0);
  for (size_t k = 0; k < d3.row_idx.size(); ++k) {
    degree[static_cast<size_t>(d3.row_idx[k])]++;
    sum[static_cast<size_t>(d3.row_idx[k])] += d3.vals[k];
  }
  for (int i = 0; i < d3.nrows; ++i) {
    CHECK(degree[static_cast<size_t>(i)] == 2);
    CHECK(sum[static_cast<size_t>(i)] == 0);
  }
}

TEST_CASE("cell volumes are conserved in the two-cube merge") {
  const FacetSoup soup = assemble({two_cubes()});
  const Skeleton skeleton = skeleton_merge(fragment_all(soup, 1e-8), 1e-8);
  const TgwResult tgw = extract_all_cells(skeleton);
  double total = 0, positive = 0;
  for (double m : tgw.measures) {
    total += m;
    if (m > 0) positive += m;
  }
  CHECK(std::abs(total) < 1e-9 * positive);
  REQUIRE(tgw.exterior_cycles.size() == 1);
}

TEST_CASE("a cube inside a hollow cube becomes a cavity") {
  const auto inputs = {translated_cube(0, 0, 0, 3.0),
                       translated_cube(1, 1, 1)};
  const auto result = space_arrangement(inputs, 1e-8, 1);
  // Gap cell (with cavity) + inner solid cell; one root exterior.
  CHECK(interior_cell_count(result) == 2);
  CHECK(result.exterior_cells.size() == 1);
  // The gap cell's column contains all 12 faces, the inner cell 6.
  const auto& d3 = result.boundary(3);
  std::vector<int> support;
  for (int j = 0; j < d3.ncols; ++j)
    support.push_back(d3.col_ptr[j + 1] - d3.col_ptr[j]);
  std::sort(support.begin(), support.end());
  CHECK(support == std::vector<int>{6, 6, 12});

  // Shell containment and volumes at the extraction level.
  const FacetSoup soup = assemble(inputs);
  const Skeleton skeleton = skeleton_merge(fragment_all(soup, 1e-8), 1e-8);
  const TgwResult tgw = extract_all_cells(skeleton);
  CHECK(tgw.component_count == 2);
  const ShellPoset poset = shell_poset(skeleton, tgw);
  REQUIRE(poset.shell_cycles.size() == 2);
  const int inner =
      std::abs(tgw.measures[static_cast<size_t>(poset.shell_cycles[0])]) < 2
          ? 0
          : 1;
  CHECK(poset.parent[static_cast<size_t>(inner)] == 1 - inner);
  CHECK(poset.parent[static_cast<size_t>(1 - inner)] == -1);
  CHECK(poset.parity[static_cast<size_t>(inner)] == 1);
  CHECK(poset.parity[static_cast<size_t>(1 - inner)] == 0);
  std::vector<double> measures = tgw.measures;
  std::sort(measures.begin(), measures.end());
  CHECK(measures[0] == doctest::Approx(-27.0));
  CHECK(measures[1] == doctest::Approx(-1.0));
  CHECK(measures[2] == doctest::Approx(1.0));
  CHECK(measures[3] == doctest::Approx(27.0));
}

TEST_CASE("three nested shells alternate solid and cavity by parity") {
  const auto inputs = {translated_cube(0, 0, 0, 9.0),
                       translated_cube(3, 3, 3, 3.0),
                       translated_cube(4, 4, 4)};
  const auto result = space_arrangement(inputs, 1e-8, 1);
  CHECK(interior_cell_count(result) == 3);
  CHECK(result.exterior_cells.size() == 1);

  const FacetSoup soup = assemble(inputs);
  const Skeleton skeleton = skeleton_merge(fragment_all(soup, 1e-8), 1e-8);
  const TgwResult tgw = extract_all_cells(skeleton);
  const ShellPoset poset = shell_poset(skeleton, tgw);
  REQUIRE(poset.shell_cycles.size() == 3);
  // Chain outer <- middle <- inner; parity alternates with depth.
  std::vector<size_t> order(3);
  for (size_t i = 0; i < 3; ++i)
    order[static_cast<size_t>(
        std::count(poset.parent.begin(), poset.parent.end(),
                   static_cast<int>(i)) == 0
            ? 2
            : poset.parent[i] == -1 ? 0 : 1)] = i;
  CHECK(poset.parent[order[0]] == -1);
  CHECK(poset.parent[order[1]] == static_cast<int>(order[0]));
  CHECK(poset.parent[order[2]] == static_cast<int>(order[1]));
  CHECK(poset.parity[order[0]] == 0);
  CHECK(poset.parity[order[1]] == 1);
  CHECK(poset.parity[order[2]] == 0);
}

TEST_CASE("disjoint cubes stay independent roots") {
  const auto inputs = {translated_cube(0, 0, 0), translated_cube(5, 0, 0)};
  const auto result = space_arrangement(inputs, 1e-8, 1);
  CHECK(interior_cell_count(result) == 2);
  CHECK(result.exterior_cells.size() == 2);

  const FacetSoup soup = assemble(inputs);
  const Skeleton skeleton = skeleton_merge(fragment_all(soup, 1e-8), 1e-8);
  const ShellPoset poset = shell_poset(skeleton, extract_all_cells(skeleton));
  for (int p : poset.parent) CHECK(p == -1);
}

TEST_CASE("worker count does not change the result") {
  const Complex a = cuboidal_grid({{2, 2, 2}, 1.0});
  Complex b = cuboidal_grid({{2, 2, 2}, 1.0});
  b.geometry = center_on_centroid(b.geometry);
  b.geometry = transform(b.geometry, 0.3, 0, 0.7, {1, 1, 1});
  const auto serial = space_arrangement({a, b}, 1e-8, 1);
  const auto parallel = space_arrangement({a, b}, 1e-8, 8);
  CHECK(serial.geometry.coords == parallel.geometry.coords);
  CHECK(serial.tables.at(2).cells == parallel.tables.at(2).cells);
  CHECK(serial.boundary(3) == parallel.boundary(3));
  CHECK(serial.exterior_cells == parallel.exterior_cells);
}

TEST_CASE("rotated grid merge reproduces the published counts") {
  Complex a = cuboidal_grid({{3, 3, 3}, 1.0});
  a.geometry = center_on_centroid(a.geometry);
  Complex b = cuboidal_grid({{3, 3, 3}, 1.0});
  b.geometry = center_on_centroid(b.geometry);
  b.geometry = transform(b.geometry, M_PI / 6, 0, M_PI / 6, {0, 0, 0});
  const auto result = space_arrangement({a, b}, 1e-8, 4);
  CHECK(result.tables.at(2).size() == 816);
  CHECK(result.tables.at(3).size() == 236);
}
