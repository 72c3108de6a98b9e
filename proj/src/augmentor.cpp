#include "dentseg/augmentor.hpp"

#include <cmath>
#include <stdexcept>

#include "dentseg/rng.hpp"

namespace dentseg {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Vec3 centroid_of_cells(const TriangleMesh& mesh) {
  Vec3 sum = Vec3::Zero();
  for (const auto& tri : mesh.faces) {
    sum += (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
  }
  return sum / static_cast<double>(mesh.faces.size());
}
}  // namespace

Eigen::Matrix3d rotation_from_draw(const AugmentationDraw& draw) {
  const double ax = draw.angles_deg[0] * kDegToRad;
  const double ay = draw.angles_deg[1] * kDegToRad;
  const double az = draw.angles_deg[2] * kDegToRad;
  Eigen::Matrix3d rx, ry, rz;
  rx << 1, 0, 0, 0, std::cos(ax), -std::sin(ax), 0, std::sin(ax), std::cos(ax);
  ry << std::cos(ay), 0, std::sin(ay), 0, 1, 0, -std::sin(ay), 0, std::cos(ay);
  rz << std::cos(az), -std::sin(az), 0, std::sin(az), std::cos(az), 0, 0, 0, 1;
  return rz * ry * rx;
}

TriangleMesh apply_draw(const TriangleMesh& mesh, const AugmentationDraw& draw) {
  const Vec3 center = centroid_of_cells(mesh);
  const Eigen::Matrix3d rot = rotation_from_draw(draw);
  const Vec3 shift(draw.translation[0], draw.translation[1], draw.translation[2]);

  TriangleMesh out;
  out.faces = mesh.faces;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    out.vertices.push_back(center + shift + draw.scale * (rot * (v - center)));
  }
  return out;
}

std::vector<AugmentedVariant> augment(const TriangleMesh& mesh,
                                      const LabelField& labels,
                                      const AugmentationSpec& spec) {
  mesh.validate();
  if (static_cast<int>(labels.size()) != mesh.cell_count()) {
    throw std::invalid_argument("label count does not match mesh cell count");
  }
  if (spec.factor < 1) {
    throw std::invalid_argument("augmentation factor must be >= 1");
  }

  std::vector<AugmentedVariant> variants;
  variants.reserve(spec.factor);
  for (int i = 0; i < spec.factor; ++i) {
    SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    AugmentationDraw draw;
    for (int axis = 0; axis < 3; ++axis) {
      draw.angles_deg[axis] = rng.uniform(spec.rotation_deg.lo, spec.rotation_deg.hi);
    }
    draw.scale = rng.uniform(spec.scale.lo, spec.scale.hi);
    for (int axis = 0; axis < 3; ++axis) {
      draw.translation[axis] = rng.uniform(spec.translation.lo, spec.translation.hi);
    }
    variants.push_back({apply_draw(mesh, draw), labels, draw});
  }
  return variants;
}

}  // namespace dentseg
