#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dentseg/mesh_io.hpp"
#include "dentseg/synth_data.hpp"
#include "support/fixtures.hpp"

using namespace dentseg;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
  return fs::temp_directory_path() / ("dentseg_io_" + name);
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void append_le32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_f32(std::string& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  append_le32(out, u);
}

// Test-local binary STL encoder, written straight from the format layout so
// the library's writer is not its own referee.
std::string reference_stl_bytes(const TriangleMesh& mesh) {
  std::string out(80, '\0');
  append_le32(out, static_cast<std::uint32_t>(mesh.faces.size()));
  for (const auto& tri : mesh.faces) {
    for (int k = 0; k < 3; ++k) append_f32(out, 0.0f);  // normal, ignored by readers
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 3; ++c) {
        append_f32(out, static_cast<float>(mesh.vertices[tri[k]][c]));
      }
    }
    out.push_back('\0');
    out.push_back('\0');
  }
  return out;
}

}  // namespace

TEST_CASE("minimal ASCII STL parses to one facet") {
  const char* text =
      "solid one\n"
      "  facet normal 0 0 1\n"
      "    outer loop\n"
      "      vertex 0 0 0\n"
      "      vertex 1 0 0\n"
      "      vertex 0 1 0\n"
      "    endloop\n"
      "  endfacet\n"
      "endsolid one\n";
  const auto path = tmp("one.stl");
  write_file(path, text);
  const auto mesh = read_mesh(path);
  CHECK(mesh.cell_count() == 1);
  CHECK(mesh.vertex_count() == 3);
  CHECK(mesh.vertices[1] == Vec3(1, 0, 0));
}

TEST_CASE("reference-encoded cube reads back with welded vertices") {
  const auto cube = fixtures::unit_cube();
  const auto path = tmp("cube_ref.stl");
  write_file(path, reference_stl_bytes(cube));
  const auto mesh = read_mesh(path);
  CHECK(mesh.cell_count() == 12);
  CHECK(mesh.vertex_count() == 8);  // duplicated corners welded by exact equality
  for (int f = 0; f < 12; ++f) {
    for (int k = 0; k < 3; ++k) {
      CHECK(mesh.vertices[mesh.faces[f][k]] == cube.vertices[cube.faces[f][k]]);
    }
  }
}

TEST_CASE("binary STL file sizes follow the record layout") {
  const auto tri_path = tmp("tri.stl");
  write_mesh(fixtures::single_triangle(), tri_path, MeshFormat::kStlBinary);
  CHECK(fs::file_size(tri_path) == 80 + 4 + 50);

  const auto cube_path = tmp("cube.stl");
  write_mesh(fixtures::unit_cube(), cube_path, MeshFormat::kStlBinary);
  CHECK(fs::file_size(cube_path) == 80 + 4 + 600);
}

TEST_CASE("binary round trip preserves order and float32 coordinates") {
  ArchSpec spec;
  spec.target_cells = 300;
  spec.seed = 5;
  const auto arch = generate_arch(spec).mesh;

  const auto path = tmp("arch.stl");
  write_mesh(arch, path, MeshFormat::kStlBinary);
  const auto back = read_mesh(path, MeshFormat::kStlBinary);

  REQUIRE(back.cell_count() == arch.cell_count());
  for (int f = 0; f < arch.cell_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const Vec3 original = arch.vertices[arch.faces[f][k]];
      const Vec3 round = back.vertices[back.faces[f][k]];
      for (int c = 0; c < 3; ++c) {
        CHECK(round[c] == static_cast<double>(static_cast<float>(original[c])));
      }
    }
  }
}

TEST_CASE("ASCII round trip matches binary round trip") {
  const auto cube = fixtures::unit_cube();
  const auto path = tmp("cube_ascii.stl");
  write_mesh(cube, path, MeshFormat::kStlAscii);
  const auto back = read_mesh(path);  // sniffed from "solid" prefix
  REQUIRE(back.cell_count() == 12);
  CHECK(back.vertex_count() == 8);
  for (int f = 0; f < 12; ++f) {
    for (int k = 0; k < 3; ++k) {
      CHECK(back.vertices[back.faces[f][k]] == cube.vertices[cube.faces[f][k]]);
    }
  }
}

TEST_CASE("truncated binary STL reports the shortfall") {
  const auto cube = fixtures::unit_cube();
  std::string bytes = reference_stl_bytes(cube);
  bytes.resize(bytes.size() - 30);
  const auto path = tmp("cut.stl");
  write_file(path, bytes);
  CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("truncated"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("byte offset"),
                       std::runtime_error);
}

TEST_CASE("binary file with a 'solid' header still parses") {
  auto bytes = reference_stl_bytes(fixtures::unit_cube());
  std::memcpy(bytes.data(), "solid ", 6);
  const auto path = tmp("solid_binary.stl");
  write_file(path, bytes);
  const auto mesh = read_mesh(path);  // ASCII attempt fails, binary fallback
  CHECK(mesh.cell_count() == 12);
}

TEST_CASE("OBJ round trip and 1-based indexing") {
  const auto cube = fixtures::unit_cube();
  const auto path = tmp("cube.obj");
  write_mesh(cube, path);
  const auto back = read_mesh(path);
  REQUIRE(back.cell_count() == 12);
  CHECK(back.vertex_count() == 8);
  for (int f = 0; f < 12; ++f) {
    CHECK(back.faces[f] == cube.faces[f]);
    for (int k = 0; k < 3; ++k) {
      CHECK(back.vertices[back.faces[f][k]] == cube.vertices[cube.faces[f][k]]);
    }
  }
}

TEST_CASE("OBJ polygon faces fan-triangulate with a warning") {
  const char* text =
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 1 1 0\n"
      "v 0 1 0\n"
      "f 1 2 3 4\n";
  const auto path = tmp("quad.obj");
  write_file(path, text);
  std::vector<std::string> warnings;
  const auto mesh = read_mesh(path, MeshFormat::kAuto, &warnings);
  CHECK(mesh.cell_count() == 2);
  CHECK(mesh.faces[0] == std::array<std::int32_t, 3>{0, 1, 2});
  CHECK(mesh.faces[1] == std::array<std::int32_t, 3>{0, 2, 3});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("fan-triangulated") != std::string::npos);
}

TEST_CASE("OBJ slash-form references use the vertex field") {
  const char* text =
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 0 1 0\n"
      "f 1/1 2/2/2 3//3\n";
  const auto path = tmp("slash.obj");
  write_file(path, text);
  const auto mesh = read_mesh(path);
  CHECK(mesh.cell_count() == 1);
  CHECK(mesh.faces[0] == std::array<std::int32_t, 3>{0, 1, 2});
}

TEST_CASE("OBJ errors carry line numbers") {
  const auto path = tmp("bad.obj");
  write_file(path, "v 0 0 0\nv 1 0 zebra\n");
  CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("line 2"),
                       std::runtime_error);
}

TEST_CASE("label sidecar round trip") {
  const LabelField labels = {0, 5, 14, 3, 3};
  const auto path = tmp("labels.json");
  write_labels(labels, path);
  CHECK(read_labels(path, 5) == labels);
  CHECK(read_labels(path, kAnyCellCount) == labels);
}

TEST_CASE("labels above 14 clip to the wisdom class") {
  const auto path = tmp("clip.json");
  write_file(path, R"({"format_version":1,"cell_count":3,"labels":[15,23,48]})");
  CHECK(read_labels(path, 3) == LabelField{14, 14, 14});

  const auto id_path = tmp("id.json");
  write_file(id_path, R"({"format_version":1,"cell_count":3,"labels":[0,5,14]})");
  CHECK(read_labels(id_path, 3) == LabelField{0, 5, 14});
}

TEST_CASE("clipping is idempotent") {
  for (int v = 0; v < 100; ++v) CHECK(clip_label(clip_label(v)) == clip_label(v));
}

TEST_CASE("negative labels are rejected with the cell index") {
  const auto path = tmp("neg.json");
  write_file(path, R"({"format_version":1,"cell_count":2,"labels":[-1,3]})");
  CHECK_THROWS_WITH_AS(read_labels(path, 2), doctest::Contains("cell 0"),
                       std::runtime_error);
}

TEST_CASE("sidecar count mismatches name both counts") {
  const auto path = tmp("mismatch.json");
  write_file(path, R"({"format_version":1,"cell_count":3,"labels":[0,1,2]})");
  CHECK_THROWS_WITH_AS(read_labels(path, 7), doctest::Contains("3"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read_labels(path, 7), doctest::Contains("7"),
                       std::runtime_error);
}

TEST_CASE("missing file errors cleanly") {
  CHECK_THROWS_AS(read_mesh(tmp("nope.stl")), std::runtime_error);
  CHECK_THROWS_AS(read_labels(tmp("nope.json"), 1), std::runtime_error);
}
