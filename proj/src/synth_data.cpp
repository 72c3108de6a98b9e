#include "dentseg/synth_data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dentseg/rng.hpp"

namespace dentseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Arch dimensions in model units (roughly millimetres for a human arch).
constexpr double kInnerRadius = 6.0;
constexpr double kOuterRadius = 14.0;
constexpr double kBandDome = 0.8;

struct Tooth {
  int label = 0;
  double u_center = 0;  // along-arch parameter in [0,1]
  double v_center = 0;  // across-band parameter in [0,1]
  double u_radius = 0;
  double v_radius = 0;
  double height = 0;
};

// Normalized elliptical distance of (u,v) from the tooth footprint center.
double footprint_distance(const Tooth& t, double u, double v) {
  const double du = (u - t.u_center) / t.u_radius;
  const double dv = (v - t.v_center) / t.v_radius;
  return std::sqrt(du * du + dv * dv);
}

}  // namespace

LabeledMesh generate_arch(const ArchSpec& spec) {
  if (spec.n_teeth < 1 || spec.n_teeth > 14) {
    throw std::invalid_argument("n_teeth must be in [1,14], got " +
                                std::to_string(spec.n_teeth));
  }
  if (spec.target_cells < 100) {
    throw std::invalid_argument("target_cells must be >= 100, got " +
                                std::to_string(spec.target_cells));
  }
  for (int m : spec.missing_teeth) {
    if (m < 1 || m > spec.n_teeth) {
      throw std::invalid_argument("missing tooth index " + std::to_string(m) +
                                  " outside [1," + std::to_string(spec.n_teeth) + "]");
    }
  }
  if (spec.n_teeth - static_cast<int>(spec.missing_teeth.size()) < 1) {
    throw std::invalid_argument("all teeth marked missing");
  }

  SplitMix64 rng(derive_seed(spec.seed, 0xa2c4));

  // Tooth slots spread along the arch; mild jitter keeps arches distinct
  // while footprints stay disjoint (slot spacing 1/n, radius < 0.4/n).
  std::vector<Tooth> teeth;
  for (int t = 1; t <= spec.n_teeth; ++t) {
    const double slot = 1.0 / spec.n_teeth;
    Tooth tooth;
    tooth.label = t;
    tooth.u_center = (t - 0.5) * slot + rng.uniform(-0.05, 0.05) * slot;
    tooth.v_center = 0.5 + rng.uniform(-0.05, 0.05);
    tooth.u_radius = slot * rng.uniform(0.30, 0.38);
    tooth.v_radius = rng.uniform(0.20, 0.26);
    tooth.height = rng.uniform(1.6, 2.4);
    if (!spec.missing_teeth.count(t)) teeth.push_back(tooth);
  }

  // Grid resolution: the arch midline is ~4x longer than the band is wide.
  const double aspect = kPi * 0.5 * (kInnerRadius + kOuterRadius) / (kOuterRadius - kInnerRadius);
  int rows = std::max(4, static_cast<int>(std::lround(std::sqrt(spec.target_cells / (2.0 * aspect)))) + 1);
  int cols = std::max(4, static_cast<int>(std::lround(spec.target_cells / (2.0 * (rows - 1)))) + 1);

  const double z_sign = spec.jaw == Jaw::kMandible ? -1.0 : 1.0;

  auto surface_height = [&](double u, double v) {
    double z = kBandDome * std::sin(kPi * v) + 0.15 * std::sin(3.0 * kPi * u);
    for (const Tooth& t : teeth) {
      const double d = footprint_distance(t, u, v);
      if (d < 1.0) {
        const double c = std::cos(0.5 * kPi * d);
        z += t.height * c * c;
      }
    }
    return z;
  };

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(cols) * rows);
  for (int i = 0; i < cols; ++i) {
    const double u = static_cast<double>(i) / (cols - 1);
    const double phi = kPi * u;
    for (int j = 0; j < rows; ++j) {
      const double v = static_cast<double>(j) / (rows - 1);
      const double r = kInnerRadius + v * (kOuterRadius - kInnerRadius);
      mesh.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi),
                                 z_sign * surface_height(u, v));
    }
  }

  auto vertex_at = [rows](int i, int j) { return static_cast<std::int32_t>(i * rows + j); };

  LabelField labels;
  const int n_cells = 2 * (cols - 1) * (rows - 1);
  mesh.faces.reserve(n_cells);
  labels.reserve(n_cells);

  auto label_at = [&](double u, double v) {
    for (const Tooth& t : teeth) {
      if (footprint_distance(t, u, v) < 1.0) return t.label;
    }
    return kGingivaClass;
  };

  const double du = 1.0 / (cols - 1);
  const double dv = 1.0 / (rows - 1);
  for (int i = 0; i + 1 < cols; ++i) {
    for (int j = 0; j + 1 < rows; ++j) {
      // the u -> phi polar map reverses orientation, so wind clockwise in
      // (u,v) to keep the tooth side of the band outward (+z for a maxilla)
      std::array<std::int32_t, 3> f0{vertex_at(i, j), vertex_at(i + 1, j + 1), vertex_at(i + 1, j)};
      std::array<std::int32_t, 3> f1{vertex_at(i, j), vertex_at(i, j + 1), vertex_at(i + 1, j + 1)};
      if (spec.jaw == Jaw::kMandible) {
        std::swap(f0[1], f0[2]);
        std::swap(f1[1], f1[2]);
      }
      mesh.faces.push_back(f0);
      mesh.faces.push_back(f1);
      // label from the face's parameter-space centroid (winding-independent)
      const double u0 = i * du, v0 = j * dv;
      labels.push_back(label_at(u0 + 2.0 * du / 3.0, v0 + dv / 3.0));
      labels.push_back(label_at(u0 + du / 3.0, v0 + 2.0 * dv / 3.0));
    }
  }

  return {std::move(mesh), std::move(labels)};
}

}  // namespace dentseg
