#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dentseg/decimator.hpp"
#include "dentseg/synth_data.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dentseg;

namespace {

TriangleMesh test_arch(int cells, std::uint64_t seed) {
  ArchSpec spec;
  spec.target_cells = cells;
  spec.seed = seed;
  return generate_arch(spec).mesh;
}

}  // namespace

TEST_CASE("rate 1 is the identity") {
  const auto arch = test_arch(500, 1);
  const auto result = decimate(arch, 1.0);
  CHECK(result.mesh.faces == arch.faces);
  REQUIRE(result.mesh.vertex_count() == arch.vertex_count());
  for (int v = 0; v < arch.vertex_count(); ++v) {
    CHECK(result.mesh.vertices[v] == arch.vertices[v]);
  }
  CHECK(result.report.input_cells == arch.cell_count());
  CHECK(result.report.output_cells == arch.cell_count());
  CHECK(result.report.achieved_rate == 1.0);
  CHECK(result.report.max_quadric_error == 0.0);
}

TEST_CASE("unit cube at rate 0.5 stays a cube-like solid") {
  const auto cube = fixtures::unit_cube();
  const auto result = decimate(cube, 0.5);
  CHECK(result.mesh.cell_count() >= 4);
  CHECK(result.mesh.cell_count() <= 6);
  // 12 -> 6 cells leaves five vertices for eight corners; the surface cannot
  // track the cube closer than the collapse scale, only stay within it
  CHECK(oracles::sampled_hausdorff(cube, result.mesh) <= 0.5);
  const auto geo = compute_cell_geometry(result.mesh);
  CHECK(geo.degenerate_cells.empty());
}

TEST_CASE("output size tracks the requested rate") {
  const auto arch = test_arch(2000, 5);
  for (double rate : {0.5, 0.25, 0.1}) {
    const auto result = decimate(arch, rate);
    const int target = static_cast<int>(std::lround(rate * arch.cell_count()));
    CHECK(result.mesh.cell_count() <= target);
    CHECK(result.mesh.cell_count() >= target - 2);
    CHECK(result.report.achieved_rate ==
          static_cast<double>(result.mesh.cell_count()) / arch.cell_count());
  }
}

TEST_CASE("smaller rates never produce more cells") {
  const auto arch = test_arch(1000, 8);
  int previous = arch.cell_count() + 1;
  for (double rate : {0.9, 0.6, 0.3, 0.1}) {
    const auto now = decimate(arch, rate).mesh.cell_count();
    CHECK(now < previous);
    previous = now;
  }
}

TEST_CASE("decimated surface stays near the original") {
  const auto arch = test_arch(2000, 2);
  const auto result = decimate(arch, 0.25);
  const auto geo = compute_cell_geometry(arch);
  const double distance = oracles::sampled_hausdorff(arch, result.mesh);
  CHECK(distance <= 0.02 * geo.bbox_diagonal());
}

TEST_CASE("same input and rate reproduce the same mesh") {
  const auto arch = test_arch(800, 3);
  const auto a = decimate(arch, 0.3);
  const auto b = decimate(arch, 0.3);
  CHECK(a.mesh.faces == b.mesh.faces);
  REQUIRE(a.mesh.vertex_count() == b.mesh.vertex_count());
  for (int v = 0; v < a.mesh.vertex_count(); ++v) {
    CHECK(a.mesh.vertices[v] == b.mesh.vertices[v]);
  }
  CHECK(a.report.max_quadric_error == b.report.max_quadric_error);
}

TEST_CASE("tiny targets clamp to 4 cells with a warning") {
  std::vector<std::string> warnings;
  const auto result = decimate(fixtures::unit_cube(), 0.25, &warnings);
  CHECK(result.mesh.cell_count() >= 4);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("clamped to 4") != std::string::npos);
}

TEST_CASE("rates outside (0,1] are rejected") {
  const auto cube = fixtures::unit_cube();
  for (double rate : {0.0, -0.5, 1.5}) {
    CHECK_THROWS_WITH_AS(decimate(cube, rate), doctest::Contains("(0,1]"),
                         std::invalid_argument);
  }
}
