// Network input assembly: the N x 15 per-cell attribute matrix (vertex
// coordinates, unit normal, centroid relative to the mesh centroid, z-scored
// per column) and the small/large-radius cell adjacency built from centroid
// distances.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "dentseg/geometry.hpp"

namespace dentseg {

constexpr int kFeatureCount = 15;

// Scale-relative defaults for the two adjacency radii, as fractions of the
// bounding-box diagonal.
constexpr double kDefaultSmallRadiusFactor = 0.05;
constexpr double kDefaultLargeRadiusFactor = 0.12;

struct CellFeatures {
  Eigen::MatrixXd matrix;  // N x 15, z-scored per column
  std::array<double, kFeatureCount> column_mean{};
  std::array<double, kFeatureCount> column_std{};  // 1 for constant columns

  int cell_count() const { return static_cast<int>(matrix.rows()); }
};

// Column layout: [0..8] the three vertex coordinates, [9..11] unit normal,
// [12..14] centroid minus mesh centroid. Degenerate cells take the average
// normal of the non-degenerate cells.
CellFeatures build_features(const TriangleMesh& mesh, const CellGeometry& geometry);

struct SparseAdjacency {
  int n = 0;
  double radius = 0;
  std::vector<std::vector<int>> neighbors;  // sorted, self excluded, symmetric

  int degree(int i) const { return static_cast<int>(neighbors[i].size()); }
};

SparseAdjacency build_adjacency(const CellGeometry& geometry, double radius);

// A_S and A_L in one pass over a shared k-d tree.
std::pair<SparseAdjacency, SparseAdjacency> build_adjacency(
    const CellGeometry& geometry, double radius_small, double radius_large);

}  // namespace dentseg
