// Independent reference implementations the fast paths are checked against:
// brute-force neighbor queries, exact point-to-triangle distances with a
// sampled Hausdorff wrapper, exhaustive MRF enumeration, and exhaustive
// binary-energy minimization mirroring the max-flow construction.
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"
#include "dentseg/refiner.hpp"

namespace oracles {

// Indices with |points[i] - query| <= radius, ascending; `skip` excluded.
std::vector<int> brute_radius(const std::vector<dentseg::Vec3>& points,
                              const dentseg::Vec3& query, double radius, int skip = -1);

// k nearest as (squared distance, index), lexicographically sorted.
std::vector<std::pair<double, int>> brute_nearest(
    const std::vector<dentseg::Vec3>& points, const dentseg::Vec3& query, int k);

// All-pairs KNN majority vote with the library's tie rules, reimplemented
// from scratch.
dentseg::LabelField brute_knn_vote(const std::vector<dentseg::Vec3>& coarse,
                                   const dentseg::LabelField& labels,
                                   const std::vector<dentseg::Vec3>& fine, int k);

double point_triangle_distance(const dentseg::Vec3& p, const dentseg::Vec3& a,
                               const dentseg::Vec3& b, const dentseg::Vec3& c);

// Symmetric sampled Hausdorff distance: per-cell samples (vertices, edge
// midpoints, centroid) against the exact nearest triangle of the other mesh.
double sampled_hausdorff(const dentseg::TriangleMesh& a, const dentseg::TriangleMesh& b);

// Global minimum of the MRF energy over `allowed`^N labelings.
std::pair<dentseg::LabelField, double> enumerate_mrf(const dentseg::MrfProblem& problem,
                                                     const std::vector<int>& allowed,
                                                     double lambda);

// Binary energy in the max-flow construction's terms: accumulated unary costs
// (C0, C1) per node plus directed pair terms cap * [x_i = 0] * [x_j = 1].
struct BinaryEnergy {
  int n = 0;
  std::vector<std::array<double, 2>> unary;
  struct Pair {
    int i, j;
    double cap;
  };
  std::vector<Pair> pairs;

  double cost(const std::vector<int>& x) const;
};

// Minimizing assignment and its cost by enumeration over 2^n assignments.
std::pair<std::vector<int>, double> enumerate_binary_min(const BinaryEnergy& energy);

}  // namespace oracles
