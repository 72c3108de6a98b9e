// k-d tree over 3D points backing the adjacency builder, the KNN label
// transfer, and the sampled surface-distance checks.
//
// Query results are defined to match an all-pairs scan bit for bit: pruning
// bounds are padded slightly so no candidate is lost, and the final accept
// test reuses squared_distance() in the same expression order a brute-force
// scan would. Ties order by (squared distance, point index).
#pragma once

#include <utility>
#include <vector>

#include "dentseg/geometry.hpp"

namespace dentseg {

inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Vec3>& points);

  // Indices of all points with squared_distance(q, p) <= radius^2, ascending.
  // `skip` excludes one index (used for irreflexive adjacency).
  std::vector<int> radius_indices(const Vec3& query, double radius, int skip = -1) const;

  // The k nearest points as (squared distance, index), sorted lexicographic.
  // k is clamped to the point count.
  std::vector<std::pair<double, int>> nearest(const Vec3& query, int k) const;

  int size() const { return static_cast<int>(points_.size()); }

 private:
  struct Node {
    int point = -1;
    int left = -1;
    int right = -1;
    int axis = 0;
  };

  int build(std::vector<int>& idx, int lo, int hi, int depth);
  void radius_walk(int node, const Vec3& q, double r2, double bound, int skip,
                   std::vector<int>& out) const;
  void nearest_walk(int node, const Vec3& q, int k,
                    std::vector<std::pair<double, int>>& heap) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace dentseg
