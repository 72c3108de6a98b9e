// Graph-cut cleanup of network posteriors.
//
// Builds a 15-label MRF over the cell face-adjacency graph: unary costs are
// min-shifted negative log posteriors, pairwise costs are Potts with weight
// exp(-theta/sigma) for dihedral angle theta, so flat regions are expensive
// to cut and creases (tooth/gum boundaries) are cheap. Minimized with
// alpha-expansion over a max-flow kernel; each accepted move strictly lowers
// the energy and sweeps repeat until none improves.
#pragma once

#include <vector>

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"
#include "dentseg/segnet.hpp"

namespace dentseg {

struct RefinerConfig {
  double lambda = 1.0;  // smoothness scale; 0 disables refinement
  double sigma = 0.5;   // radians; crease sensitivity of the pairwise weight
};

struct MrfProblem {
  Eigen::MatrixXd unary;  // N x 15, per-cell min-shifted -log posterior

  struct Edge {
    int a, b;       // a < b, unique
    double weight;  // >= 0
  };
  std::vector<Edge> edges;

  int cell_count() const { return static_cast<int>(unary.rows()); }
};

// Face pairs sharing an undirected mesh edge become MRF edges.
MrfProblem build_mrf(const ProbabilityField& prob, const TriangleMesh& mesh,
                     const CellGeometry& geometry, const RefinerConfig& config = {});

double mrf_energy(const MrfProblem& problem, const LabelField& labels, double lambda);

// Alpha-expansion from the argmax initialization.
LabelField solve_mrf(const MrfProblem& problem, double lambda);

LabelField refine(const ProbabilityField& prob, const TriangleMesh& mesh,
                  const CellGeometry& geometry, const RefinerConfig& config = {});

}  // namespace dentseg
