// Small meshes shared across test files.
#pragma once

#include "dentseg/geometry.hpp"

namespace fixtures {

inline dentseg::TriangleMesh single_triangle() {
  dentseg::TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  mesh.faces = {{0, 1, 2}};
  return mesh;
}

// Axis-aligned unit cube, 8 vertices, 12 outward-wound faces.
inline dentseg::TriangleMesh unit_cube() {
  dentseg::TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  mesh.faces = {
      {0, 2, 1}, {0, 3, 2},  // bottom, normal -z
      {4, 5, 6}, {4, 6, 7},  // top, +z
      {0, 1, 5}, {0, 5, 4},  // front, -y
      {3, 6, 2}, {3, 7, 6},  // back, +y
      {0, 4, 7}, {0, 7, 3},  // left, -x
      {1, 2, 6}, {1, 6, 5},  // right, +x
  };
  return mesh;
}

// Planar triangulated grid of rows x cols quads (2 cells each), z = 0.
inline dentseg::TriangleMesh grid_patch(int rows, int cols, double spacing = 1.0) {
  dentseg::TriangleMesh mesh;
  auto vertex = [&](int i, int j) { return i * (cols + 1) + j; };
  for (int i = 0; i <= rows; ++i) {
    for (int j = 0; j <= cols; ++j) {
      mesh.vertices.push_back({j * spacing, i * spacing, 0.0});
    }
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      mesh.faces.push_back({vertex(i, j), vertex(i, j + 1), vertex(i + 1, j + 1)});
      mesh.faces.push_back({vertex(i, j), vertex(i + 1, j + 1), vertex(i + 1, j)});
    }
  }
  return mesh;
}

}  // namespace fixtures
