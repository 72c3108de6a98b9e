// Mesh and label-sidecar I/O.
//
// Formats: binary STL (80-byte header, little-endian uint32 facet count,
// 50-byte records), ASCII STL, OBJ (v/f records, 1-based indices), and a JSON
// label sidecar {format_version, cell_count, labels:[...]} index-aligned with
// face order. STL vertices are welded by exact coordinate equality.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dentseg/geometry.hpp"
#include "dentseg/labels.hpp"

namespace dentseg {

enum class MeshFormat { kAuto, kStlBinary, kStlAscii, kObj };

// `warnings`, when non-null, collects non-fatal notes (e.g. fan-triangulated
// OBJ polygons); otherwise they go to stderr.
TriangleMesh read_mesh(const std::filesystem::path& path,
                       MeshFormat format = MeshFormat::kAuto,
                       std::vector<std::string>* warnings = nullptr);

// kAuto writes OBJ for a ".obj" extension and binary STL otherwise.
void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
                MeshFormat format = MeshFormat::kAuto);

// Pass for n_cells when the caller has no mesh to check against.
constexpr int kAnyCellCount = -1;

// Reads a sidecar, checks cell_count against n_cells, clips every raw label
// to min(v, 14). Negative labels are rejected with the offending cell index.
LabelField read_labels(const std::filesystem::path& path, int n_cells);

void write_labels(const LabelField& labels, const std::filesystem::path& path);

}  // namespace dentseg
