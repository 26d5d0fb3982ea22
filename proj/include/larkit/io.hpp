#pragma once

#include <string>
#include <vector>

#include "larkit/lar.hpp"

namespace larkit {

// LAR JSON interchange: {"dim": d, "V": [[x, y, z], ...],
// "cells": {"1": [[...]], ...}} with 1-based vertex indices and numbers
// at 17 significant digits. save(load(x)) is byte-identical for
// documents produced by save_lar.
Complex load_lar(const std::string& path);
void save_lar(const Complex& complex, const std::string& path);
std::string serialize_lar(const Complex& complex);
Complex parse_lar(const std::string& text);

// Wavefront OBJ. Import keeps vertices and faces (plus the unique
// face-boundary edges); export writes one polygon per face, grouped per
// top-dimensional cell when a cell table is present.
Complex import_obj(const std::string& path);
void export_obj(const Complex& complex, const std::string& path);

// One cell pulled out of a complex with its own copy of the geometry.
struct CellMesh {
  Geometry geometry;
  // Oriented vertex loops per face, local indices.
  std::vector<std::vector<int>> faces;
};

// Each top-dimensional cell translated by (scale - 1) times the offset
// of its centroid from the complex centroid; cells are not deformed.
std::vector<CellMesh> explode(const Complex& complex, double scale);
std::vector<CellMesh> explode(const ChainComplexResult& result, double scale);

void export_obj(const std::vector<CellMesh>& cells, const std::string& path);

}  // namespace larkit
