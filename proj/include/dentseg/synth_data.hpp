// Deterministic generator of labeled dental-arch meshes: a half-annulus
// gingiva band with ellipsoidal tooth bumps along the arch. Ground truth is
// exact by construction; anatomical realism is a non-goal.
#pragma once

#include <cstdint>
#include <set>

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"

namespace dentseg {

enum class Jaw { kMaxilla, kMandible };

struct ArchSpec {
  int n_teeth = 14;          // teeth slots along the arch, labels 1..n_teeth
  int target_cells = 4000;   // tessellation aims within +-10% of this
  Jaw jaw = Jaw::kMaxilla;   // mandible mirrors the arch vertically
  std::set<int> missing_teeth;  // slot indices in [1, n_teeth] left as gingiva
  std::uint64_t seed = 0;
};

struct LabeledMesh {
  TriangleMesh mesh;
  LabelField labels;
};

LabeledMesh generate_arch(const ArchSpec& spec);

}  // namespace dentseg
