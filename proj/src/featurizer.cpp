#include "dentseg/featurizer.hpp"

#include <cmath>
#include <stdexcept>

#include "dentseg/spatial.hpp"

namespace dentseg {

CellFeatures build_features(const TriangleMesh& mesh, const CellGeometry& geometry) {
  const int n = mesh.cell_count();
  if (n == 0) throw std::invalid_argument("cannot featurize an empty mesh");
  if (geometry.cell_count() != n) {
    throw std::invalid_argument("geometry cell count does not match mesh");
  }

  Vec3 average_normal = Vec3::Zero();
  const int regular = n - static_cast<int>(geometry.degenerate_cells.size());
  if (regular > 0) {
    for (const Vec3& nm : geometry.normals) average_normal += nm;
    const double len = average_normal.norm();
    average_normal = len > 0 ? Vec3(average_normal / len) : Vec3::Zero();
  }

  CellFeatures features;
  features.matrix.resize(n, kFeatureCount);
  for (int i = 0; i < n; ++i) {
    const auto& tri = mesh.faces[i];
    for (int k = 0; k < 3; ++k) {
      const Vec3& v = mesh.vertices[tri[k]];
      features.matrix(i, 3 * k + 0) = v.x();
      features.matrix(i, 3 * k + 1) = v.y();
      features.matrix(i, 3 * k + 2) = v.z();
    }
    const Vec3& normal =
        geometry.normals[i].isZero() ? average_normal : geometry.normals[i];
    const Vec3 rel = geometry.centroids[i] - geometry.mesh_centroid;
    for (int c = 0; c < 3; ++c) {
      features.matrix(i, 9 + c) = normal[c];
      features.matrix(i, 12 + c) = rel[c];
    }
  }

  for (int c = 0; c < kFeatureCount; ++c) {
    const double mean = features.matrix.col(c).mean();
    const double var = (features.matrix.col(c).array() - mean).square().mean();
    double std = std::sqrt(var);
    if (std < 1e-12) std = 1.0;  // constant column left unscaled
    features.column_mean[c] = mean;
    features.column_std[c] = std;
    features.matrix.col(c) = (features.matrix.col(c).array() - mean) / std;
  }
  return features;
}

SparseAdjacency build_adjacency(const CellGeometry& geometry, double radius) {
  if (!(radius > 0)) {
    throw std::invalid_argument("adjacency radius must be positive");
  }
  const int n = geometry.cell_count();
  SparseAdjacency adj;
  adj.n = n;
  adj.radius = radius;
  adj.neighbors.resize(n);
  const KdTree3 tree(geometry.centroids);
  for (int i = 0; i < n; ++i) {
    adj.neighbors[i] = tree.radius_indices(geometry.centroids[i], radius, i);
  }
  return adj;
}

std::pair<SparseAdjacency, SparseAdjacency> build_adjacency(
    const CellGeometry& geometry, double radius_small, double radius_large) {
  if (!(radius_small > 0) || !(radius_large > 0)) {
    throw std::invalid_argument("adjacency radii must be positive");
  }
  if (radius_small > radius_large) {
    throw std::invalid_argument("radius_small must not exceed radius_large");
  }
  const int n = geometry.cell_count();
  SparseAdjacency small, large;
  small.n = large.n = n;
  small.radius = radius_small;
  large.radius = radius_large;
  small.neighbors.resize(n);
  large.neighbors.resize(n);

  const KdTree3 tree(geometry.centroids);
  const double r2_small = radius_small * radius_small;
  for (int i = 0; i < n; ++i) {
    large.neighbors[i] = tree.radius_indices(geometry.centroids[i], radius_large, i);
    for (int j : large.neighbors[i]) {
      if (squared_distance(geometry.centroids[i], geometry.centroids[j]) <= r2_small) {
        small.neighbors[i].push_back(j);
      }
    }
  }
  return {std::move(small), std::move(large)};
}

}  // namespace dentseg
