#pragma once

// Shared fixtures: the two-cube example (input V/FV, output W/FW/CW and
// the published 3x18 coboundary matrix) used as golden data across suites.

#include <array>
#include <vector>

namespace fixtures {

// Closed forms behind the published 4-decimal coordinates.
inline constexpr double kH = 0.86602540378443865;   // sqrt(3)/2
inline constexpr double kA = 0.21132486540518712;   // (3 - sqrt(3))/6
inline constexpr double kB = 1.0 - kA;
inline constexpr double kE = 0.5 + kH;

// 16 input vertices: a unit cube plus a second one rotated pi/6 about z
// and shifted by (0.5, 0.5, 0.5).
inline const std::vector<std::array<double, 3>> two_cube_vertices = {
    {0.0, 0.0, 0.0},     {0.0, 0.0, 1.0},     {0.0, 1.0, 0.0},
    {0.0, 1.0, 1.0},     {1.0, 0.0, 0.0},     {1.0, 0.0, 1.0},
    {1.0, 1.0, 0.0},     {1.0, 1.0, 1.0},     {0.5, 0.5, 0.5},
    {0.5, 0.5, 1.5},     {0.0, kE, 0.5},      {0.0, kE, 1.5},
    {kE, 1.0, 0.5},      {kE, 1.0, 1.5},      {kH, 1.0 + kH, 0.5},
    {kH, 1.0 + kH, 1.5}};

// 12 quadrilateral faces, 1-based vertex indices.
inline const std::vector<std::vector<int>> two_cube_faces = {
    {1, 3, 5, 7},    {9, 10, 11, 12},  {9, 11, 13, 15}, {2, 4, 6, 8},
    {13, 14, 15, 16}, {1, 2, 3, 4},    {3, 4, 7, 8},    {1, 2, 5, 6},
    {9, 10, 13, 14}, {11, 12, 15, 16}, {10, 12, 14, 16}, {5, 6, 7, 8}};

// The published 3x18 coboundary delta_2 of the merged complex.
inline const int delta2[3][18] = {
    {1, 0, -1, -1, 0, 0, 0, 1, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0},
    {-1, 0, 0, 0, 0, 1, -1, -1, 0, 0, -1, 1, 1, 0, 0, 1, 1, 0},
    {0, -1, 1, 1, 1, 0, 0, 0, -1, 1, 0, 0, 0, 1, -1, 0, 0, -1}};

// Merged complex: 22 vertices, 18 faces, 3 interior cells.
inline const std::vector<std::array<double, 3>> merged_vertices = {
    {1.0, 1.0, 0.0},     {1.0, 0.0, 0.0},   {0.0, 1.0, 0.0},
    {0.0, 0.0, 0.0},     {0.5, 0.5, 1.0},   {0.5, 0.5, 0.5},
    {kA, 1.0, 1.0},      {kA, 1.0, 0.5},    {0.5, 0.5, 1.5},
    {0.0, kE, 0.5},      {0.0, kE, 1.5},    {1.0, kB, 0.5},
    {1.0, 1.0, 0.5},     {kE, 1.0, 0.5},    {kH, 1.0 + kH, 0.5},
    {1.0, 1.0, 1.0},     {1.0, kB, 1.0},    {0.0, 1.0, 1.0},
    {0.0, 0.0, 1.0},     {1.0, 0.0, 1.0},   {kE, 1.0, 1.5},
    {kH, 1.0 + kH, 1.5}};

inline const std::vector<std::vector<int>> merged_faces = {
    {6, 8, 12, 13},          {9, 11, 21, 22},
    {7, 8, 13, 16},          {12, 13, 16, 17},
    {10, 11, 15, 22},        {3, 4, 18, 19},
    {2, 4, 19, 20},          {5, 6, 12, 17},
    {14, 15, 21, 22},        {5, 7, 16, 17},
    {5, 6, 7, 8},            {1, 2, 3, 4},
    {5, 7, 17, 18, 19, 20},  {5, 7, 8, 9, 10, 11},
    {8, 10, 12, 13, 14, 15}, {1, 3, 7, 8, 13, 18},
    {1, 2, 12, 13, 17, 20},  {5, 9, 12, 14, 17, 21}};

inline const std::vector<std::vector<int>> merged_cells = {
    {5, 6, 7, 8, 12, 13, 16, 17},
    {1, 2, 3, 4, 5, 6, 7, 8, 12, 13, 17, 18, 19, 20},
    {5, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 21, 22}};

}  // namespace fixtures
