#include "dentseg/decimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace dentseg {

namespace {

constexpr double kBoundaryWeight = 1000.0;
constexpr double kSolveDetThreshold = 1e-10;

using Quadric = Eigen::Matrix4d;

Quadric plane_quadric(const Vec3& normal, double d) {
  Eigen::Vector4d p(normal.x(), normal.y(), normal.z(), d);
  return p * p.transpose();
}

double quadric_cost(const Quadric& q, const Vec3& v) {
  Eigen::Vector4d h(v.x(), v.y(), v.z(), 1.0);
  return h.dot(q * h);
}

struct Candidate {
  double cost;
  int a, b;  // a < b
  int stamp_a, stamp_b;
  Vec3 target;
};

struct CandidateOrder {
  bool operator()(const Candidate& l, const Candidate& r) const {
    if (l.cost != r.cost) return l.cost > r.cost;
    if (l.a != r.a) return l.a > r.a;
    return l.b > r.b;
  }
};

class QemCollapser {
 public:
  explicit QemCollapser(const TriangleMesh& mesh)
      : positions_(mesh.vertices),
        faces_(mesh.faces),
        face_alive_(mesh.faces.size(), true),
        vertex_alive_(mesh.vertices.size(), true),
        stamps_(mesh.vertices.size(), 0),
        quadrics_(mesh.vertices.size(), Quadric::Zero()),
        incident_(mesh.vertices.size()) {
    alive_faces_ = static_cast<int>(faces_.size());
    for (int f = 0; f < alive_faces_; ++f) {
      for (int k = 0; k < 3; ++k) incident_[faces_[f][k]].push_back(f);
    }
    accumulate_quadrics();
    seed_heap();
  }

  DecimationResult run(int target_cells) {
    while (alive_faces_ > target_cells && !heap_.empty()) {
      Candidate cand = heap_.top();
      heap_.pop();
      if (!valid(cand)) continue;
      try_collapse(cand);
    }
    return extract();
  }

 private:
  void accumulate_quadrics() {
    // face plane quadrics
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& tri = faces_[f];
      const Vec3 cross = (positions_[tri[1]] - positions_[tri[0]])
                             .cross(positions_[tri[2]] - positions_[tri[0]]);
      const double len = cross.norm();
      if (len < 1e-12) continue;  // zero-area face contributes no plane
      const Vec3 n = cross / len;
      const Quadric q = plane_quadric(n, -n.dot(positions_[tri[0]]));
      for (int k = 0; k < 3; ++k) quadrics_[tri[k]] += q;
    }
    // boundary constraint planes: perpendicular to the face through the edge
    std::map<std::pair<int, int>, std::pair<int, int>> edge_faces;  // edge -> (count, face)
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& tri = faces_[f];
      for (int k = 0; k < 3; ++k) {
        const int u = tri[k], v = tri[(k + 1) % 3];
        auto key = std::minmax(u, v);
        auto& entry = edge_faces[{key.first, key.second}];
        entry.first++;
        entry.second = static_cast<int>(f);
      }
    }
    for (const auto& [edge, entry] : edge_faces) {
      if (entry.first != 1) continue;
      const auto& tri = faces_[entry.second];
      const Vec3 face_cross = (positions_[tri[1]] - positions_[tri[0]])
                                  .cross(positions_[tri[2]] - positions_[tri[0]]);
      const Vec3 edge_dir = positions_[edge.second] - positions_[edge.first];
      Vec3 m = edge_dir.cross(face_cross);
      const double len = m.norm();
      if (len < 1e-12) continue;
      m /= len;
      const Quadric q = kBoundaryWeight * plane_quadric(m, -m.dot(positions_[edge.first]));
      quadrics_[edge.first] += q;
      quadrics_[edge.second] += q;
    }
  }

  void seed_heap() {
    std::set<std::pair<int, int>> edges;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& tri = faces_[f];
      for (int k = 0; k < 3; ++k) {
        edges.insert(std::minmax(tri[k], tri[(k + 1) % 3]));
      }
    }
    for (const auto& [a, b] : edges) push_candidate(a, b);
  }

  void push_candidate(int a, int b) {
    const Quadric q = quadrics_[a] + quadrics_[b];
    Vec3 target;
    double cost;
    const Eigen::Matrix3d A = q.topLeftCorner<3, 3>();
    const Vec3 rhs(-q(0, 3), -q(1, 3), -q(2, 3));
    if (std::abs(A.determinant()) > kSolveDetThreshold) {
      target = A.partialPivLu().solve(rhs);
      cost = quadric_cost(q, target);
    } else {
      // singular quadric: pick the best of the endpoints and the midpoint
      const Vec3 options[3] = {positions_[a], positions_[b],
                               0.5 * (positions_[a] + positions_[b])};
      target = options[0];
      cost = quadric_cost(q, options[0]);
      for (int i = 1; i < 3; ++i) {
        const double c = quadric_cost(q, options[i]);
        if (c < cost) {
          cost = c;
          target = options[i];
        }
      }
    }
    heap_.push({cost, a, b, stamps_[a], stamps_[b], target});
  }

  bool valid(const Candidate& c) const {
    return vertex_alive_[c.a] && vertex_alive_[c.b] &&
           stamps_[c.a] == c.stamp_a && stamps_[c.b] == c.stamp_b;
  }

  std::vector<int> shared_faces(int a, int b) const {
    std::vector<int> out;
    for (int f : incident_[a]) {
      if (!face_alive_[f]) continue;
      const auto& tri = faces_[f];
      if (tri[0] == b || tri[1] == b || tri[2] == b) out.push_back(f);
    }
    return out;
  }

  std::set<int> vertex_neighbors(int v) const {
    std::set<int> out;
    for (int f : incident_[v]) {
      if (!face_alive_[f]) continue;
      for (int k = 0; k < 3; ++k) {
        if (faces_[f][k] != v) out.insert(faces_[f][k]);
      }
    }
    return out;
  }

  void try_collapse(const Candidate& c) {
    const auto shared = shared_faces(c.a, c.b);
    if (shared.empty()) return;  // stale: endpoints no longer form an edge

    // link condition: common neighbors must be exactly the shared faces'
    // opposite vertices, otherwise the collapse pinches the surface
    {
      std::set<int> opposite;
      for (int f : shared) {
        for (int k = 0; k < 3; ++k) {
          const int v = faces_[f][k];
          if (v != c.a && v != c.b) opposite.insert(v);
        }
      }
      const std::set<int> na = vertex_neighbors(c.a);
      const std::set<int> nb = vertex_neighbors(c.b);
      std::vector<int> common;
      std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                            std::back_inserter(common));
      if (common.size() != opposite.size()) return;
    }

    // normal-flip veto over every surviving face touching either endpoint
    for (int v : {c.a, c.b}) {
      for (int f : incident_[v]) {
        if (!face_alive_[f]) continue;
        if (std::find(shared.begin(), shared.end(), f) != shared.end()) continue;
        const auto& tri = faces_[f];
        Vec3 before[3], after[3];
        for (int k = 0; k < 3; ++k) {
          before[k] = positions_[tri[k]];
          after[k] = (tri[k] == c.a || tri[k] == c.b) ? c.target : before[k];
        }
        const Vec3 n0 = (before[1] - before[0]).cross(before[2] - before[0]);
        const Vec3 n1 = (after[1] - after[0]).cross(after[2] - after[0]);
        if (n0.dot(n1) < 0) return;
      }
    }

    // apply: b merges into a at the target position
    positions_[c.a] = c.target;
    quadrics_[c.a] += quadrics_[c.b];
    for (int f : shared) {
      if (face_alive_[f]) {
        face_alive_[f] = false;
        --alive_faces_;
      }
    }
    for (int f : incident_[c.b]) {
      if (!face_alive_[f]) continue;
      for (int k = 0; k < 3; ++k) {
        if (faces_[f][k] == c.b) faces_[f][k] = c.a;
      }
      incident_[c.a].push_back(f);
    }
    incident_[c.b].clear();
    vertex_alive_[c.b] = false;
    ++stamps_[c.a];
    ++stamps_[c.b];
    max_error_ = std::max(max_error_, std::max(0.0, c.cost));

    for (int nbr : vertex_neighbors(c.a)) {
      const auto [lo, hi] = std::minmax(c.a, nbr);
      push_candidate(lo, hi);
    }
  }

  DecimationResult extract() const {
    DecimationResult result;
    std::vector<std::int32_t> remap(positions_.size(), -1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!face_alive_[f]) continue;
      std::array<std::int32_t, 3> tri;
      for (int k = 0; k < 3; ++k) {
        const int v = faces_[f][k];
        if (remap[v] < 0) {
          remap[v] = static_cast<std::int32_t>(result.mesh.vertices.size());
          result.mesh.vertices.push_back(positions_[v]);
        }
        tri[k] = remap[v];
      }
      result.mesh.faces.push_back(tri);
    }
    result.report.output_cells = result.mesh.cell_count();
    result.report.max_quadric_error = max_error_;
    return result;
  }

  std::vector<Vec3> positions_;
  std::vector<std::array<std::int32_t, 3>> faces_;
  std::vector<bool> face_alive_;
  std::vector<bool> vertex_alive_;
  std::vector<int> stamps_;
  std::vector<Quadric> quadrics_;
  std::vector<std::vector<int>> incident_;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap_;
  int alive_faces_ = 0;
  double max_error_ = 0.0;
};

}  // namespace

DecimationResult decimate(const TriangleMesh& mesh, double rate,
                          std::vector<std::string>* warnings) {
  mesh.validate();
  if (!(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("decimation rate must be in (0,1], got " +
                                std::to_string(rate));
  }
  const int n = mesh.cell_count();
  if (rate == 1.0) {
    DecimationResult identity{mesh, {n, n, 1.0, 0.0}};
    return identity;
  }

  int target = static_cast<int>(std::lround(rate * n));
  if (target < 4) {
    const std::string msg = "decimation target " + std::to_string(target) +
                            " below 4 cells, clamped to 4";
    if (warnings) {
      warnings->push_back(msg);
    } else {
      std::cerr << "warning: " << msg << "\n";
    }
    target = 4;
  }

  QemCollapser collapser(mesh);
  DecimationResult result = collapser.run(target);
  result.report.input_cells = n;
  result.report.achieved_rate =
      static_cast<double>(result.report.output_cells) / static_cast<double>(n);
  return result;
}

}  // namespace dentseg
