// Core mesh types and the derived per-cell quantities (centroids, unit
// normals, bounds) every pipeline stage consumes.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace dentseg {

using Vec3 = Eigen::Vector3d;

// Indexed triangle soup. Face order is load-bearing: labels, features and
// probability rows are all index-aligned with `faces`.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::int32_t, 3>> faces;

  int cell_count() const { return static_cast<int>(faces.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }

  // Throws std::invalid_argument on an empty mesh, an out-of-range face
  // index, or a face repeating a vertex index.
  void validate() const;
};

struct CellGeometry {
  std::vector<Vec3> centroids;
  std::vector<Vec3> normals;  // unit length; zero vector for degenerate cells
  Vec3 mesh_centroid = Vec3::Zero();
  Vec3 bbox_min = Vec3::Zero();
  Vec3 bbox_max = Vec3::Zero();
  std::vector<std::int32_t> degenerate_cells;  // sorted ascending

  int cell_count() const { return static_cast<int>(centroids.size()); }
  double bbox_diagonal() const { return (bbox_max - bbox_min).norm(); }
};

// Centroid = mean of the three vertices; normal = normalized cross product of
// the edge vectors in stored winding order (right-hand rule). Zero-area cells
// keep a zero normal and land in `degenerate_cells`.
CellGeometry compute_cell_geometry(const TriangleMesh& mesh);

// Unnormalized face normal (edge cross product); magnitude is twice the area.
Vec3 face_cross(const TriangleMesh& mesh, int face);

}  // namespace dentseg
