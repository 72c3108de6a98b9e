#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "dentseg/geometry.hpp"
#include "dentseg/synth_data.hpp"

using namespace dentseg;

namespace {

std::array<int, kNumClasses> class_histogram(const LabelField& labels) {
  std::array<int, kNumClasses> counts{};
  for (int l : labels) {
    REQUIRE(l >= 0);
    REQUIRE(l < kNumClasses);
    ++counts[l];
  }
  return counts;
}

}  // namespace

TEST_CASE("same spec reproduces the arch bit for bit") {
  ArchSpec spec;
  spec.seed = 42;
  const auto a = generate_arch(spec);
  const auto b = generate_arch(spec);
  REQUIRE(a.mesh.vertex_count() == b.mesh.vertex_count());
  for (int v = 0; v < a.mesh.vertex_count(); ++v) {
    CHECK(a.mesh.vertices[v] == b.mesh.vertices[v]);
  }
  CHECK(a.mesh.faces == b.mesh.faces);
  CHECK(a.labels == b.labels);
}

TEST_CASE("different seeds give different geometry") {
  ArchSpec spec;
  spec.seed = 1;
  const auto a = generate_arch(spec);
  spec.seed = 2;
  const auto b = generate_arch(spec);
  REQUIRE(a.mesh.vertex_count() == b.mesh.vertex_count());
  bool any_differ = false;
  for (int v = 0; v < a.mesh.vertex_count() && !any_differ; ++v) {
    any_differ = a.mesh.vertices[v] != b.mesh.vertices[v];
  }
  CHECK(any_differ);
}

TEST_CASE("default arch carries all 15 classes and a gingiva majority") {
  ArchSpec spec;
  spec.n_teeth = 14;
  spec.seed = 7;
  const auto arch = generate_arch(spec);
  arch.mesh.validate();
  CHECK(arch.labels.size() == static_cast<std::size_t>(arch.mesh.cell_count()));

  const auto counts = class_histogram(arch.labels);
  for (int c = 0; c < kNumClasses; ++c) CHECK(counts[c] > 0);
  for (int c = 1; c < kNumClasses; ++c) CHECK(counts[kGingivaClass] > counts[c]);
}

TEST_CASE("cell count lands within 10 percent of the target") {
  for (int target : {500, 4000, 20000}) {
    ArchSpec spec;
    spec.target_cells = target;
    spec.seed = 3;
    const auto arch = generate_arch(spec);
    CHECK(arch.mesh.cell_count() >= target * 0.9);
    CHECK(arch.mesh.cell_count() <= target * 1.1);
  }
}

TEST_CASE("missing teeth leave their labels out") {
  ArchSpec spec;
  spec.missing_teeth = {3, 10};
  spec.seed = 9;
  const auto arch = generate_arch(spec);
  const auto counts = class_histogram(arch.labels);
  CHECK(counts[3] == 0);
  CHECK(counts[10] == 0);
  CHECK(counts[4] > 0);
  CHECK(counts[9] > 0);
}

TEST_CASE("fewer slots use labels 1..n_teeth only") {
  ArchSpec spec;
  spec.n_teeth = 6;
  spec.seed = 4;
  const auto arch = generate_arch(spec);
  const auto counts = class_histogram(arch.labels);
  for (int c = 1; c <= 6; ++c) CHECK(counts[c] > 0);
  for (int c = 7; c < kNumClasses; ++c) CHECK(counts[c] == 0);
}

TEST_CASE("mandible mirrors the maxilla with flipped winding") {
  ArchSpec spec;
  spec.seed = 13;
  const auto upper = generate_arch(spec);
  spec.jaw = Jaw::kMandible;
  const auto lower = generate_arch(spec);

  REQUIRE(upper.mesh.vertex_count() == lower.mesh.vertex_count());
  REQUIRE(upper.mesh.cell_count() == lower.mesh.cell_count());
  CHECK(upper.labels == lower.labels);  // labels track cells, not orientation

  for (int v = 0; v < upper.mesh.vertex_count(); ++v) {
    CHECK(lower.mesh.vertices[v].x() == upper.mesh.vertices[v].x());
    CHECK(lower.mesh.vertices[v].y() == upper.mesh.vertices[v].y());
    CHECK(lower.mesh.vertices[v].z() == -upper.mesh.vertices[v].z());
  }
  for (int f = 0; f < upper.mesh.cell_count(); ++f) {
    CHECK(lower.mesh.faces[f][0] == upper.mesh.faces[f][0]);
    CHECK(lower.mesh.faces[f][1] == upper.mesh.faces[f][2]);
    CHECK(lower.mesh.faces[f][2] == upper.mesh.faces[f][1]);
  }

  // Mirror + winding swap keeps normals pointing away from the occlusal side.
  const auto up_geo = compute_cell_geometry(upper.mesh);
  const auto low_geo = compute_cell_geometry(lower.mesh);
  double up_z = 0, low_z = 0;
  for (int f = 0; f < upper.mesh.cell_count(); ++f) {
    up_z += up_geo.normals[f].z();
    low_z += low_geo.normals[f].z();
  }
  CHECK(up_z > 0);
  CHECK(low_z < 0);
}

TEST_CASE("each tooth footprint is one connected patch") {
  ArchSpec spec;
  spec.seed = 17;
  const auto arch = generate_arch(spec);

  // Union-find over cells sharing an edge and a label.
  std::vector<int> parent(arch.mesh.cell_count());
  for (int i = 0; i < arch.mesh.cell_count(); ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < arch.mesh.cell_count(); ++f) {
    const auto& tri = arch.mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  for (const auto& [edge, faces] : edge_faces) {
    for (std::size_t i = 0; i + 1 < faces.size(); ++i) {
      if (arch.labels[faces[i]] == arch.labels[faces[i + 1]]) {
        parent[find(faces[i])] = find(faces[i + 1]);
      }
    }
  }
  for (int c = 1; c < kNumClasses; ++c) {
    std::set<int> roots;
    for (int f = 0; f < arch.mesh.cell_count(); ++f) {
      if (arch.labels[f] == c) roots.insert(find(f));
    }
    CHECK(roots.size() == 1);
  }
}

TEST_CASE("invalid specs are rejected") {
  ArchSpec spec;
  spec.n_teeth = 0;
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);
  spec.n_teeth = 15;
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);

  spec = ArchSpec{};
  spec.target_cells = 50;
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);

  spec = ArchSpec{};
  spec.missing_teeth = {0};
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);
  spec.missing_teeth = {15};
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);

  spec = ArchSpec{};
  spec.n_teeth = 2;
  spec.missing_teeth = {1, 2};
  CHECK_THROWS_AS(generate_arch(spec), std::invalid_argument);
}
