// Quadric-error-metric edge collapse, the pipeline's compression step.
// Collapses are chosen greedily by minimal quadric error from a min-heap;
// candidates that would flip an incident face normal are vetoed. Boundary
// edges carry a heavily weighted constraint-plane quadric so the open gum
// boundary keeps its shape.
#pragma once

#include <string>
#include <vector>

#include "dentseg/geometry.hpp"

namespace dentseg {

struct DecimationReport {
  int input_cells = 0;
  int output_cells = 0;
  double achieved_rate = 1.0;       // output_cells / input_cells
  double max_quadric_error = 0.0;   // squared model units
};

struct DecimationResult {
  TriangleMesh mesh;
  DecimationReport report;
};

// Retains rate * N cells (rate in (0,1]; rate 1 returns the input unchanged).
// Tie-breaking and traversal are fully deterministic: equal-cost collapses
// order by lexicographic endpoint pair.
DecimationResult decimate(const TriangleMesh& mesh, double rate,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace dentseg
