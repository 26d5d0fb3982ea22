#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "larkit/arrange3d.hpp"
#include "larkit/generators.hpp"
#include "larkit/lar.hpp"
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

}  // namespace

TEST_CASE("characteristic matrix of a single triangle") {
  CellTable fv{2, {{0, 1, 2}}};
  const auto m = characteristic_matrix(fv, 3);
  CHECK(m.nrows == 1);
  CHECK(m.ncols == 3);
  CHECK(m.nnz() == 3);
  for (int j = 0; j < 3; ++j) CHECK(m.at(0, j) == 1);
}

TEST_CASE("characteristic matrix of the two-cube face table") {
  const Complex c = two_cubes();
  const auto m = characteristic_matrix(c.table(2), 16);
  CHECK(m.nrows == 12);
  CHECK(m.ncols == 16);
  CHECK(m.nnz() == 48);
  // Row sums are cell cardinalities, column sums count containing cells.
  const auto mt = m.transposed();
  for (int k = 0; k < 12; ++k)
    CHECK(mt.col_ptr[k + 1] - mt.col_ptr[k] == 4);
  int col_total = 0;
  for (int j = 0; j < 16; ++j) col_total += m.col_ptr[j + 1] - m.col_ptr[j];
  CHECK(col_total == 48);
}

TEST_CASE("characteristic matrix of a 3x3x3 grid face table") {
  const Complex grid = cuboidal_grid({{3, 3, 3}, 1.0});
  const auto m = characteristic_matrix(grid.table(2), grid.geometry.size());
  CHECK(m.nrows == 108);
  CHECK(m.ncols == 64);
  for (int k = 0; k < m.nrows; ++k) {
    int row_nnz = 0;
    for (int j = 0; j < m.ncols; ++j) row_nnz += m.at(k, j);
    CHECK(row_nnz == 4);
  }
}

TEST_CASE("characteristic matrix rejects out-of-range vertices") {
  CellTable fv{2, {{0, 1, 5}}};
  CHECK_THROWS_AS(characteristic_matrix(fv, 3), std::out_of_range);
}

TEST_CASE("canonicalize merges duplicate cells") {
  CellTable t{2, {{3, 1, 2}, {2, 1, 3}}};
  const auto out = canonicalize(t);
  CHECK(out.table.cells == std::vector<std::vector<int>>{{1, 2, 3}});
  CHECK(out.cell_map == std::vector<int>{0, 0});
}

TEST_CASE("canonicalize keeps already canonical tables, identity map") {
  CellTable t{1, {{0, 1}, {1, 2}, {0, 2}}};
  const auto out = canonicalize(t);
  CHECK(out.table.cells == t.cells);
  std::vector<int> identity(3);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(out.cell_map == identity);
}

TEST_CASE("canonicalize merges rotated vertex cycles and is idempotent") {
  CellTable t{2, {{0, 1, 2, 3}, {2, 3, 0, 1}, {1, 2, 3, 0}}};
  const auto out = canonicalize(t);
  CHECK(out.table.size() == 1);
  CHECK(out.cell_map == std::vector<int>{0, 0, 0});
  const auto again = canonicalize(out.table);
  CHECK(again.table.cells == out.table.cells);
}

TEST_CASE("euler characteristic of a triangle") {
  Complex c;
  c.geometry.dim = 2;
  c.geometry.coords = {{0, 0}, {1, 0}, {0, 1}};
  c.tables[1] = CellTable{1, {{0, 1}, {1, 2}, {0, 2}}};
  c.tables[2] = CellTable{2, {{0, 1, 2}}};
  CHECK(euler_characteristic(c) == 1);
}

TEST_CASE("euler characteristic of cuboidal grids") {
  CHECK(euler_characteristic(cuboidal_grid({{1, 1, 1}, 1.0})) == 1);
  CHECK(euler_characteristic(cuboidal_grid({{3, 3, 3}, 1.0})) == 1);
}

TEST_CASE("euler characteristic requires every table") {
  Complex c;
  c.geometry.dim = 2;
  c.geometry.coords = {{0, 0}, {1, 0}, {0, 1}};
  c.tables[2] = CellTable{2, {{0, 1, 2}}};
  CHECK_THROWS(euler_characteristic(c));
}

TEST_CASE("validation passes on the arranged two-cube complex") {
  const auto result = space_arrangement({two_cubes()}, 1e-8, 1);
  const auto report = validate_chain_complex(result);
  CHECK(report.all_passed());
  CHECK(!report.to_string().empty());
}

TEST_CASE("validation flags a flipped sign") {
  auto result = space_arrangement({two_cubes()}, 1e-8, 1);
  REQUIRE(result.operators.size() == 3);
  REQUIRE(!result.operators[1].vals.empty());
  result.operators[1].vals[0] = -result.operators[1].vals[0];
  const auto report = validate_chain_complex(result);
  CHECK(!report.all_passed());
}

TEST_CASE("cells_from_boundary unions incident faces") {
  // One cube described by its 6 quads and a single all-ones column.
  const Complex grid = cuboidal_grid({{1, 1, 1}, 1.0});
  const CellTable& fv = grid.table(2);
  std::vector<int> rows(6), cols(6, 0), vals(6, 1);
  std::iota(rows.begin(), rows.end(), 0);
  const auto b = SignedSparseMatrix::from_triplets(rows, cols, vals, 6, 1);
  const auto cw = cells_from_boundary(b, fv);
  CHECK(cw.size() == 1);
  CHECK(cw.cells[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("cells_from_boundary on the arranged two-cube complex") {
  const auto result = space_arrangement({two_cubes()}, 1e-8, 1);
  const auto cw = cells_from_boundary(result.boundary(3), result.tables.at(2));
  std::vector<int> sizes;
  for (int c = 0; c < cw.size(); ++c) {
    bool exterior = false;
    for (int e : result.exterior_cells) exterior |= e == c;
    if (!exterior) sizes.push_back(static_cast<int>(cw.cells[c].size()));
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>{8, 14, 14});
}

TEST_CASE("cells_from_boundary rejects mismatched shapes") {
  CellTable fv{2, {{0, 1, 2}}};
  const auto b = SignedSparseMatrix(4, 1);
  CHECK_THROWS_AS(cells_from_boundary(b, fv), std::invalid_argument);
}
