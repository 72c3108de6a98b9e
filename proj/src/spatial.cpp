#include "dentseg/spatial.hpp"

#include <algorithm>
#include <numeric>

namespace dentseg {

namespace {
// Pruning pads lower bounds by this factor so float rounding in the bound
// can only admit extra candidates, never drop one the final test accepts.
constexpr double kPruneSlack = 1.0 + 1e-9;

double pad(double b) { return b * kPruneSlack + 1e-30; }
}  // namespace

KdTree3::KdTree3(const std::vector<Vec3>& points) : points_(points) {
  if (points_.empty()) return;
  std::vector<int> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const int mid = lo + (hi - lo) / 2;
  // (coordinate, index) comparator keeps the tree layout deterministic
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) {
                     const double ca = points_[a][axis], cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], -1, -1, axis});
  nodes_[self].left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[self].right = right;
  return self;
}

std::vector<int> KdTree3::radius_indices(const Vec3& query, double radius, int skip) const {
  std::vector<int> out;
  if (root_ < 0 || radius < 0) return out;
  radius_walk(root_, query, radius * radius, pad(radius * radius), skip, out);
  std::sort(out.begin(), out.end());
  return out;
}

void KdTree3::radius_walk(int node, const Vec3& q, double r2, double bound, int skip,
                          std::vector<int>& out) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  const Vec3& p = points_[nd.point];
  if (nd.point != skip && squared_distance(q, p) <= r2) out.push_back(nd.point);

  const double delta = q[nd.axis] - p[nd.axis];
  const int near = delta < 0 ? nd.left : nd.right;
  const int far = delta < 0 ? nd.right : nd.left;
  radius_walk(near, q, r2, bound, skip, out);
  if (delta * delta <= bound) radius_walk(far, q, r2, bound, skip, out);
}

std::vector<std::pair<double, int>> KdTree3::nearest(const Vec3& query, int k) const {
  std::vector<std::pair<double, int>> heap;
  if (root_ < 0 || k <= 0) return heap;
  k = std::min<int>(k, size());
  heap.reserve(k + 1);
  nearest_walk(root_, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

void KdTree3::nearest_walk(int node, const Vec3& q, int k,
                           std::vector<std::pair<double, int>>& heap) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  const Vec3& p = points_[nd.point];

  const std::pair<double, int> cand{squared_distance(q, p), nd.point};
  if (static_cast<int>(heap.size()) < k) {
    heap.push_back(cand);
    std::push_heap(heap.begin(), heap.end());
  } else if (cand < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = cand;
    std::push_heap(heap.begin(), heap.end());
  }

  const double delta = q[nd.axis] - p[nd.axis];
  const int near = delta < 0 ? nd.left : nd.right;
  const int far = delta < 0 ? nd.right : nd.left;
  nearest_walk(near, q, k, heap);
  // visit the far side while it could still hold a point that beats the
  // current worst, including equal-distance lower-index ties
  if (static_cast<int>(heap.size()) < k || delta * delta <= pad(heap.front().first)) {
    nearest_walk(far, q, k, heap);
  }
}

}  // namespace dentseg
