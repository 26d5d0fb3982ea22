#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "larkit/arrange3d.hpp"
#include "larkit/generators.hpp"
#include "larkit/operators.hpp"
#include "larkit/tgw.hpp"

using namespace larkit;

namespace {

Skeleton unit_square_skeleton() {
  Geometry g;
  g.dim = 2;
  g.coords = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CellTable ev{1, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  return make_skeleton_2d(std::move(g), std::move(ev));
}

Skeleton axis_star_skeleton() {
  Geometry g;
  g.dim = 2;
  g.coords = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CellTable ev{1, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}};
  return make_skeleton_2d(std::move(g), std::move(ev));
}

// Four half-plane rectangles fanned around the segment (0,0,0)-(0,0,1),
// pointing +x, +y, -x, -y.
Skeleton fan_skeleton_3d() {
  Geometry g;
  g.dim = 3;
  g.coords = {{0, 0, 0},  {0, 0, 1},  {1, 0, 0}, {1, 0, 1},  {0, 1, 0},
              {0, 1, 1},  {-1, 0, 0}, {-1, 0, 1}, {0, -1, 0}, {0, -1, 1}};
  CellTable ev{1,
               {{0, 1},
                {0, 2}, {2, 3}, {1, 3},
                {0, 4}, {4, 5}, {1, 5},
                {0, 6}, {6, 7}, {1, 7},
                {0, 8}, {8, 9}, {1, 9}}};
  CellTable fv{2, {{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 1, 6, 7}, {0, 1, 8, 9}}};
  std::vector<std::vector<SignedCell>> cycles;
  for (int k = 0; k < 4; ++k) {
    const int base = 1 + 3 * k;
    cycles.push_back({{base, 1}, {base + 1, 1}, {base + 2, -1}, {0, -1}});
  }
  auto d2 = boundary_2_from_cycles(cycles, ev.size());
  return make_skeleton_3d(std::move(g), std::move(ev), std::move(fv),
                          std::move(d2));
}

// Skeleton of one or more complexes with no mutual intersections.
Skeleton plain_skeleton(const std::vector<Complex>& inputs) {
  const FacetSoup soup = assemble(inputs);
  const CandidateIndex index = CandidateIndex::build(soup);
  std::vector<Fragment> fragments;
  for (int f = 0; f < soup.faces.size(); ++f)
    fragments.push_back(fragment_face(soup, index.query(f), f, 1e-8));
  return skeleton_merge(fragments, 1e-8);
}

}  // namespace

TEST_CASE("petal fan around a vertex orders edges by direction angle") {
  const Skeleton s = axis_star_skeleton();
  const PetalFan fan = petal_fan(s, 0);
  REQUIRE(fan.petals.size() == 4);
  CHECK(fan.petals == std::vector<int>{0, 1, 2, 3});
  CHECK(fan.angles[0] == doctest::Approx(0.0));
  CHECK(fan.angles[1] == doctest::Approx(M_PI / 2));
  CHECK(fan.angles[2] == doctest::Approx(M_PI));
  CHECK(fan.angles[3] == doctest::Approx(3 * M_PI / 2));
}

TEST_CASE("petal fan around a 3D hinge follows the dihedral order") {
  const Skeleton s = fan_skeleton_3d();
  const int hinge = [&] {
    for (int h = 0; h < s.hinges.size(); ++h)
      if (s.hinges.cells[static_cast<size_t>(h)] == std::vector<int>{0, 1})
        return h;
    return -1;
  }();
  REQUIRE(hinge >= 0);
  const PetalFan fan = petal_fan(s, hinge);
  REQUIRE(fan.petals.size() == 4);
  // Cyclic order must match the geometric order +x, +y, -x, -y.
  const auto it = std::find(fan.petals.begin(), fan.petals.end(), 0);
  REQUIRE(it != fan.petals.end());
  const size_t i = static_cast<size_t>(it - fan.petals.begin());
  CHECK(fan.petals[(i + 1) % 4] == 1);
  CHECK(fan.petals[(i + 2) % 4] == 2);
  CHECK(fan.petals[(i + 3) % 4] == 3);
  for (size_t k = 1; k < 4; ++k) CHECK(fan.angles[k] > fan.angles[k - 1]);
}

TEST_CASE("coplanar petals across a hinge sit a straight angle apart") {
  const Skeleton s = fan_skeleton_3d();
  const PetalFan fan = petal_fan(s, 0);
  // Petals 0 (+x) and 2 (-x) are coplanar on opposite sides.
  const auto pos = [&](int petal) {
    return static_cast<size_t>(
        std::find(fan.petals.begin(), fan.petals.end(), petal) -
        fan.petals.begin());
  };
  const double gap =
      std::fmod(std::abs(fan.angles[pos(2)] - fan.angles[pos(0)]), 2 * M_PI);
  CHECK(gap == doctest::Approx(M_PI));
}

TEST_CASE("petal fan rejects hinges with fewer than two petals") {
  Geometry g;
  g.dim = 2;
  g.coords = {{0, 0}, {1, 0}};
  CellTable ev{1, {{0, 1}}};
  const Skeleton s = make_skeleton_2d(std::move(g), std::move(ev));
  CHECK_THROWS(petal_fan(s, 0));
}

TEST_CASE("next petal cancels the hinge and cycles") {
  const Skeleton s = axis_star_skeleton();
  const PetalFan fan = petal_fan(s, 0);
  SignedCell cur{0, 1};
  std::set<int> visited;
  for (int step = 0; step < 4; ++step) {
    const SignedCell nxt = next_petal(s, fan, cur);
    const int bc = s.boundary.at(0, cur.index) * cur.sign;
    const int bn = s.boundary.at(0, nxt.index) * nxt.sign;
    CHECK(bc + bn == 0);
    // Adjacent in the cyclic order.
    const auto pos = [&](int petal) {
      return static_cast<int>(
          std::find(fan.petals.begin(), fan.petals.end(), petal) -
          fan.petals.begin());
    };
    const int delta = ((pos(nxt.index) - pos(cur.index)) % 4 + 4) % 4;
    CHECK((delta == 1 || delta == 3));
    visited.insert(cur.index);
    cur = SignedCell{nxt.index, -nxt.sign};  // keep rotating the same way
  }
  CHECK(cur.index == 0);
  CHECK(visited.size() == 4);
}

TEST_CASE("next petal on a 2-petal fan returns the other petal") {
  const Skeleton s = unit_square_skeleton();
  const PetalFan fan = petal_fan(s, 0);
  REQUIRE(fan.petals.size() == 2);
  const SignedCell cur{fan.petals[0], 1};
  const SignedCell nxt = next_petal(s, fan, cur);
  CHECK(nxt.index == fan.petals[1]);
  CHECK(s.boundary.at(0, cur.index) * cur.sign +
            s.boundary.at(0, nxt.index) * nxt.sign ==
        0);
}

TEST_CASE("next petal rejects petals outside the fan") {
  const Skeleton s = axis_star_skeleton();
  const PetalFan fan = petal_fan(s, 0);
  CHECK_THROWS(next_petal(s, fan, SignedCell{99, 1}));
}

TEST_CASE("extracting the unit square yields closed cycles of both signs") {
  const Skeleton s = unit_square_skeleton();
  const Chain a = extract_cycle(s, {0, 1});
  const Chain b = extract_cycle(s, {0, -1});
  CHECK(a.entries.size() == 4);
  CHECK(b.entries.size() == 4);
  CHECK(apply(s.boundary, a).is_zero());
  CHECK(apply(s.boundary, b).is_zero());
  const double ma = signed_measure(a, s);
  const double mb = signed_measure(b, s);
  CHECK(ma == doctest::Approx(-mb));
  CHECK(std::abs(ma) == doctest::Approx(1.0));
}

TEST_CASE("full extraction of a square: interior plus flagged exterior") {
  const Skeleton s = unit_square_skeleton();
  const TgwResult tgw = extract_all_cells(s);
  CHECK(tgw.boundary.ncols == 2);
  CHECK(tgw.component_count == 1);
  REQUIRE(tgw.exterior_cycles.size() == 1);
  const int ext = tgw.exterior_cycles[0];
  CHECK(tgw.measures[static_cast<size_t>(ext)] == doctest::Approx(-1.0));
  CHECK(tgw.measures[static_cast<size_t>(1 - ext)] == doctest::Approx(1.0));
}

TEST_CASE("square with a diagonal extracts two triangles") {
  Geometry g;
  g.dim = 2;
  g.coords = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CellTable ev{1, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}};
  const Skeleton s = make_skeleton_2d(std::move(g), std::move(ev));
  const TgwResult tgw = extract_all_cells(s);
  CHECK(tgw.boundary.ncols == 3);
  CHECK(tgw.boundary.nnz() == 10);  // 2 * edge count
  std::vector<double> measures = tgw.measures;
  std::sort(measures.begin(), measures.end());
  CHECK(measures[0] == doctest::Approx(-1.0));
  CHECK(measures[1] == doctest::Approx(0.5));
  CHECK(measures[2] == doctest::Approx(0.5));
  // Ledger: every edge consumed once per orientation.
  for (int i = 0; i < tgw.boundary.nrows; ++i) {
    int pos = 0, neg = 0;
    for (int j = 0; j < tgw.boundary.ncols; ++j) {
      if (tgw.boundary.at(i, j) > 0) ++pos;
      if (tgw.boundary.at(i, j) < 0) ++neg;
    }
    CHECK(pos == 1);
    CHECK(neg == 1);
  }
}

TEST_CASE("signed measure of the unit cube surface") {
  const Skeleton s = plain_skeleton({cuboidal_grid({{1, 1, 1}, 1.0})});
  const TgwResult tgw = extract_all_cells(s);
  REQUIRE(tgw.boundary.ncols == 2);
  std::vector<double> measures = tgw.measures;
  std::sort(measures.begin(), measures.end());
  CHECK(measures[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(measures[1] == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(tgw.exterior_cycles.size() == 1);
  CHECK(tgw.measures[static_cast<size_t>(tgw.exterior_cycles[0])] < 0);
}

TEST_CASE("extraction of a 2x1x1 grid skeleton") {
  const Skeleton s = plain_skeleton({cuboidal_grid({{2, 1, 1}, 1.0})});
  const TgwResult tgw = extract_all_cells(s);
  CHECK(tgw.boundary.ncols == 3);
  CHECK(tgw.boundary.nnz() == 2 * s.facet_count());
  std::vector<double> measures = tgw.measures;
  std::sort(measures.begin(), measures.end());
  CHECK(measures[0] == doctest::Approx(-2.0));
  CHECK(measures[1] == doctest::Approx(1.0));
  CHECK(measures[2] == doctest::Approx(1.0));
}

TEST_CASE("one negative cycle per connected component") {
  const Complex a = cuboidal_grid({{1, 1, 1}, 1.0});
  Complex b = cuboidal_grid({{1, 1, 1}, 1.0});
  b.geometry = transform(b.geometry, 0, 0, 0, {5, 0, 0});
  const Skeleton s = plain_skeleton({a, b});
  const TgwResult tgw = extract_all_cells(s);
  CHECK(tgw.component_count == 2);
  CHECK(tgw.exterior_cycles.size() == 2);
  for (int e : tgw.exterior_cycles)
    CHECK(tgw.measures[static_cast<size_t>(e)] < 0);
  double total = 0;
  for (double m : tgw.measures) total += m;
  CHECK(total == doctest::Approx(0.0));
}
