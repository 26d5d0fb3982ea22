#include "larkit/lar.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace larkit {

const CellTable& Complex::table(int p) const {
  const auto it = tables.find(p);
  if (it == tables.end())
    throw std::out_of_range("complex: missing table of dimension " +
                            std::to_string(p));
  return it->second;
}

const SignedSparseMatrix& ChainComplexResult::boundary(int p) const {
  if (p < 1 || p > static_cast<int>(operators.size()))
    throw std::out_of_range("boundary_" + std::to_string(p) + " not present");
  return operators[static_cast<size_t>(p) - 1];
}

SignedSparseMatrix characteristic_matrix(const CellTable& table, int nverts) {
  std::vector<int> rows, cols, vals;
  for (int k = 0; k < table.size(); ++k) {
    for (int v : table.cells[k]) {
      if (v < 0 || v >= nverts)
        throw std::out_of_range("characteristic_matrix: vertex out of range");
      rows.push_back(k);
      cols.push_back(v);
      vals.push_back(1);
    }
  }
  return SignedSparseMatrix::from_triplets(rows, cols, vals, table.size(),
                                           nverts);
}

CanonicalizeResult canonicalize(const CellTable& table) {
  CanonicalizeResult out;
  out.table.dim = table.dim;
  out.cell_map.resize(table.cells.size());
  std::map<std::vector<int>, int> seen;
  for (size_t k = 0; k < table.cells.size(); ++k) {
    std::vector<int> cell = table.cells[k];
    std::sort(cell.begin(), cell.end());
    cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
    const auto [it, inserted] =
        seen.emplace(cell, static_cast<int>(out.table.cells.size()));
    if (inserted) out.table.cells.push_back(std::move(cell));
    out.cell_map[k] = it->second;
  }
  return out;
}

long long euler_characteristic(const Complex& complex) {
  long long chi = complex.geometry.size();
  int sign = -1;
  for (int p = 1; p <= complex.geometry.dim; ++p) {
    chi += sign * static_cast<long long>(complex.table(p).size());
    sign = -sign;
  }
  return chi;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& c : checks)
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name
        << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
  return out.str();
}

ValidationReport validate_chain_complex(const ChainComplexResult& result) {
  ValidationReport report;
  const int d = result.geometry.dim;
  for (int p = 1; p <= d && p <= static_cast<int>(result.operators.size());
       ++p) {
    const auto& bp = result.boundary(p);
    {
      ValidationReport::Check c;
      c.name = "shape of boundary_" + std::to_string(p);
      const int expect_rows =
          p == 1 ? result.geometry.size()
                 : (result.tables.count(p - 1)
                        ? result.tables.at(p - 1).size()
                        : bp.nrows);
      const int expect_cols =
          result.tables.count(p) ? result.tables.at(p).size() : bp.ncols;
      c.passed = bp.nrows == expect_rows && bp.ncols == expect_cols;
      std::ostringstream os;
      os << bp.nrows << "x" << bp.ncols;
      c.detail = os.str();
      report.checks.push_back(std::move(c));
    }
    if (p >= 2) {
      ValidationReport::Check c;
      c.name = "boundary_" + std::to_string(p - 1) + " * boundary_" +
               std::to_string(p) + " = 0";
      try {
        const auto prod = multiply(result.boundary(p - 1), bp);
        c.passed = prod.empty();
        if (!c.passed)
          c.detail = std::to_string(prod.nnz()) + " residual entries";
      } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
      }
      report.checks.push_back(std::move(c));
    }
  }
  if (static_cast<int>(result.operators.size()) >= d && d >= 1) {
    // With the exterior cell included every facet bounds exactly two
    // d-cells with opposite signs.
    const auto& bd = result.boundary(d);
    ValidationReport::Check c;
    c.name = "boundary_" + std::to_string(d) + " row degree";
    std::vector<int> degree(static_cast<size_t>(bd.nrows), 0);
    std::vector<int> rowsum(static_cast<size_t>(bd.nrows), 0);
    for (size_t k = 0; k < bd.row_idx.size(); ++k) {
      ++degree[static_cast<size_t>(bd.row_idx[k])];
      rowsum[static_cast<size_t>(bd.row_idx[k])] += bd.vals[k];
    }
    int bad = 0;
    for (int i = 0; i < bd.nrows; ++i)
      if (degree[i] != 2 || rowsum[i] != 0) ++bad;
    c.passed = bad == 0;
    if (bad > 0)
      c.detail = std::to_string(bad) + " rows without two opposite entries" +
                 (result.exterior_cell ? "" : " (exterior not retained)");
    report.checks.push_back(std::move(c));
  }
  return report;
}

CellTable cells_from_boundary(const SignedSparseMatrix& boundary,
                              const CellTable& lower_table) {
  if (boundary.nrows != lower_table.size())
    throw std::invalid_argument("cells_from_boundary: shape mismatch");
  CellTable out;
  out.dim = lower_table.dim + 1;
  out.cells.reserve(static_cast<size_t>(boundary.ncols));
  for (int j = 0; j < boundary.ncols; ++j) {
    std::set<int> verts;
    for (int k = boundary.col_ptr[j];
         k < boundary.col_ptr[static_cast<size_t>(j) + 1]; ++k) {
      const auto& cell = lower_table.cells[static_cast<size_t>(
          boundary.row_idx[static_cast<size_t>(k)])];
      verts.insert(cell.begin(), cell.end());
    }
    out.cells.emplace_back(verts.begin(), verts.end());
  }
  return out;
}

}  // namespace larkit
