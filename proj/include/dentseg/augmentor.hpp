// Training-set expansion by random rigid + scale transforms. Every variant
// applies rotation (Rz*Ry*Rx about the mesh centroid), then uniform scale,
// then translation; the drawn parameters are logged so any output can be
// replayed exactly. The RNG stream splits per output index, so generation
// order never changes results.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"

namespace dentseg {

struct Range {
  double lo = 0;
  double hi = 0;
};

struct AugmentationSpec {
  Range rotation_deg{-15.0, 15.0};  // per axis
  Range scale{0.8, 1.2};
  Range translation{-10.0, 10.0};   // per axis
  int factor = 20;
  std::uint64_t seed = 0;
};

struct AugmentationDraw {
  std::array<double, 3> angles_deg{};  // about x, y, z
  double scale = 1.0;
  std::array<double, 3> translation{};
};

struct AugmentedVariant {
  TriangleMesh mesh;
  LabelField labels;  // copied unchanged; transform is per-vertex
  AugmentationDraw draw;
};

// v' = c + t + s * Rz*Ry*Rx * (v - c), with c the mesh centroid of cell
// centroids. Exposed so tests can replay logged draws.
Eigen::Matrix3d rotation_from_draw(const AugmentationDraw& draw);
TriangleMesh apply_draw(const TriangleMesh& mesh, const AugmentationDraw& draw);

std::vector<AugmentedVariant> augment(const TriangleMesh& mesh,
                                      const LabelField& labels,
                                      const AugmentationSpec& spec);

}  // namespace dentseg
