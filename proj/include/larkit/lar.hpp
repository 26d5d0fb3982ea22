#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "larkit/sparse.hpp"

namespace larkit {

// Metric carrier of every complex: n points with dim coordinates each.
struct Geometry {
  int dim = 0;  // 2 or 3
  std::vector<std::vector<double>> coords;

  int size() const { return static_cast<int>(coords.size()); }
};

// Characteristic matrix in user-readable form: array, indexed by cell,
// of arrays of vertex indices (0-based internally).
struct CellTable {
  int dim = 0;  // cell dimension p
  std::vector<std::vector<int>> cells;

  int size() const { return static_cast<int>(cells.size()); }
};

struct Complex {
  Geometry geometry;
  std::map<int, CellTable> tables;  // dimension -> table, 1..d

  const CellTable& table(int p) const;
  bool has_table(int p) const { return tables.count(p) > 0; }
};

// Output of an arrangement: cell tables per dimension plus the chain
// of boundary operators. boundary[p] holds the matrix of the operator
// from (p+1)-chains to p-chains, i.e. boundary[0] = first boundary map.
struct ChainComplexResult {
  Geometry geometry;
  std::map<int, CellTable> tables;
  std::vector<SignedSparseMatrix> operators;  // operators[p-1] = boundary_p
  std::optional<int> exterior_cell;           // column index before removal
  std::vector<int> exterior_cells;            // one per connected component

  const SignedSparseMatrix& boundary(int p) const;
};

SignedSparseMatrix characteristic_matrix(const CellTable& table, int nverts);

struct CanonicalizeResult {
  CellTable table;
  std::vector<int> cell_map;  // old cell index -> new cell index
};
CanonicalizeResult canonicalize(const CellTable& table);

long long euler_characteristic(const Complex& complex);

struct ValidationReport {
  struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_passed() const;
  std::string to_string() const;
};

ValidationReport validate_chain_complex(const ChainComplexResult& result);

// Recover the d-cell table from [boundary_d] by uniting, per column, the
// vertex sets of its incident (d-1)-cells.
CellTable cells_from_boundary(const SignedSparseMatrix& boundary,
                              const CellTable& lower_table);

}  // namespace larkit
