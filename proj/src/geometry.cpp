#include "dentseg/geometry.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace dentseg {

namespace {
// A cross product below this squared magnitude counts as a zero-area cell.
constexpr double kDegenerateSq = 1e-24;
}  // namespace

void TriangleMesh::validate() const {
  if (faces.empty()) {
    throw std::invalid_argument("empty mesh");
  }
  const std::int32_t nv = static_cast<std::int32_t>(vertices.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& tri = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        throw std::invalid_argument("face " + std::to_string(f) +
                                    " references vertex " + std::to_string(tri[k]) +
                                    " outside [0," + std::to_string(nv) + ")");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw std::invalid_argument("face " + std::to_string(f) +
                                  " repeats a vertex index");
    }
  }
}

Vec3 face_cross(const TriangleMesh& mesh, int face) {
  const auto& tri = mesh.faces[face];
  const Vec3& a = mesh.vertices[tri[0]];
  const Vec3& b = mesh.vertices[tri[1]];
  const Vec3& c = mesh.vertices[tri[2]];
  return (b - a).cross(c - a);
}

CellGeometry compute_cell_geometry(const TriangleMesh& mesh) {
  mesh.validate();
  const int n = mesh.cell_count();

  CellGeometry geo;
  geo.centroids.resize(n);
  geo.normals.resize(n);
  geo.bbox_min = Vec3::Constant(std::numeric_limits<double>::infinity());
  geo.bbox_max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  Vec3 centroid_sum = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const auto& tri = mesh.faces[i];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];

    geo.centroids[i] = (a + b + c) / 3.0;
    centroid_sum += geo.centroids[i];

    const Vec3 cross = (b - a).cross(c - a);
    const double sq = cross.squaredNorm();
    if (sq < kDegenerateSq) {
      geo.normals[i] = Vec3::Zero();
      geo.degenerate_cells.push_back(i);
    } else {
      geo.normals[i] = cross / std::sqrt(sq);
    }
  }
  geo.mesh_centroid = centroid_sum / static_cast<double>(n);

  for (const Vec3& v : mesh.vertices) {
    geo.bbox_min = geo.bbox_min.cwiseMin(v);
    geo.bbox_max = geo.bbox_max.cwiseMax(v);
  }
  return geo;
}

}  // namespace dentseg
