#include "dentseg/mesh_io.hpp"

#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace dentseg {

namespace {

using json = nlohmann::json;

void warn(std::vector<std::string>* sink, const std::string& msg) {
  if (sink) {
    sink->push_back(msg);
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

// Welds exactly equal coordinates to one index; -0.0 and 0.0 compare equal.
class VertexWelder {
 public:
  std::int32_t index_of(const Vec3& v, std::vector<Vec3>& vertices) {
    const auto key = std::make_tuple(v.x(), v.y(), v.z());
    auto [it, inserted] = map_.try_emplace(key, static_cast<std::int32_t>(vertices.size()));
    if (inserted) vertices.push_back(v);
    return it->second;
  }

 private:
  std::map<std::tuple<double, double, double>, std::int32_t> map_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail(path, "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

float le_float(const char* p) {
  std::uint32_t u = static_cast<std::uint8_t>(p[0]) |
                    (static_cast<std::uint8_t>(p[1]) << 8) |
                    (static_cast<std::uint8_t>(p[2]) << 16) |
                    (static_cast<std::uint8_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

TriangleMesh parse_stl_binary(const std::filesystem::path& path, const std::string& data) {
  if (data.size() < 84) {
    parse_fail(path, "binary STL truncated: " + std::to_string(data.size()) +
                         " bytes, header needs 84");
  }
  std::uint32_t count;
  std::memcpy(&count, data.data() + 80, 4);
  const std::size_t needed = 84 + 50ull * count;
  if (data.size() < needed) {
    parse_fail(path, "binary STL truncated: facet count " + std::to_string(count) +
                         " needs " + std::to_string(needed) + " bytes, file has " +
                         std::to_string(data.size()) + " (short at byte offset " +
                         std::to_string(data.size()) + ")");
  }

  TriangleMesh mesh;
  VertexWelder welder;
  mesh.faces.reserve(count);
  for (std::uint32_t f = 0; f < count; ++f) {
    const char* rec = data.data() + 84 + 50ull * f;
    std::array<std::int32_t, 3> tri;
    for (int k = 0; k < 3; ++k) {
      // skip the 12-byte stored normal; it is rederived from geometry
      const char* vp = rec + 12 + 12 * k;
      Vec3 v(le_float(vp), le_float(vp + 4), le_float(vp + 8));
      tri[k] = welder.index_of(v, mesh.vertices);
    }
    mesh.faces.push_back(tri);
  }
  return mesh;
}

TriangleMesh parse_stl_ascii(const std::filesystem::path& path, const std::string& data) {
  TriangleMesh mesh;
  VertexWelder welder;

  std::istringstream in(data);
  std::string line;
  int line_no = 0;
  std::vector<Vec3> pending;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok != "vertex") continue;
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
      parse_fail(path, "non-numeric vertex coordinate at line " + std::to_string(line_no));
    }
    // STL carries float32 payloads; keep the round-trip honest
    pending.emplace_back(static_cast<float>(x), static_cast<float>(y), static_cast<float>(z));
    if (pending.size() == 3) {
      std::array<std::int32_t, 3> tri;
      for (int k = 0; k < 3; ++k) tri[k] = welder.index_of(pending[k], mesh.vertices);
      mesh.faces.push_back(tri);
      pending.clear();
    }
  }
  if (!pending.empty()) parse_fail(path, "dangling vertex records at end of facet");
  if (mesh.faces.empty()) parse_fail(path, "ASCII STL contains no facets");
  return mesh;
}

TriangleMesh parse_obj(const std::filesystem::path& path, const std::string& data,
                       std::vector<std::string>* warnings) {
  TriangleMesh mesh;
  std::istringstream in(data);
  std::string line;
  int line_no = 0;
  bool warned_fan = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        parse_fail(path, "non-numeric vertex coordinate at line " + std::to_string(line_no));
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tok == "f") {
      std::vector<std::int32_t> idx;
      std::string ref;
      while (ls >> ref) {
        // "v", "v/vt", "v//vn", "v/vt/vn": the leading field is the vertex
        std::size_t pos = 0;
        long v = 0;
        try {
          v = std::stol(ref, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos == 0 || (pos < ref.size() && ref[pos] != '/')) {
          parse_fail(path, "bad face reference '" + ref + "' at line " + std::to_string(line_no));
        }
        if (v <= 0 || v > static_cast<long>(mesh.vertices.size())) {
          parse_fail(path, "face references vertex " + std::to_string(v) +
                               " out of range at line " + std::to_string(line_no));
        }
        idx.push_back(static_cast<std::int32_t>(v - 1));
      }
      if (idx.size() < 3) {
        parse_fail(path, "face with fewer than 3 vertices at line " + std::to_string(line_no));
      }
      if (idx.size() > 3 && !warned_fan) {
        warn(warnings, path.string() + ": polygon face at line " + std::to_string(line_no) +
                           " fan-triangulated");
        warned_fan = true;
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        mesh.faces.push_back({idx[0], idx[k], idx[k + 1]});
      }
    }
  }
  if (mesh.faces.empty()) parse_fail(path, "OBJ contains no faces");
  return mesh;
}

bool sniff_ascii_stl(const std::string& data) {
  std::size_t i = 0;
  while (i < data.size() && std::isspace(static_cast<unsigned char>(data[i]))) ++i;
  return data.compare(i, 5, "solid") == 0;
}

void put_le_float(std::ofstream& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
               static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
  out.write(b, 4);
}

void write_stl_binary(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  char header[80] = {};
  std::strncpy(header, "dentseg binary STL", sizeof(header) - 1);
  out.write(header, 80);
  const std::uint32_t count = static_cast<std::uint32_t>(mesh.faces.size());
  char cb[4] = {static_cast<char>(count & 0xff), static_cast<char>((count >> 8) & 0xff),
                static_cast<char>((count >> 16) & 0xff), static_cast<char>((count >> 24) & 0xff)};
  out.write(cb, 4);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& tri = mesh.faces[f];
    Vec3 n = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                 .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    const double len = n.norm();
    if (len > 0) n /= len;
    for (int k = 0; k < 3; ++k) put_le_float(out, static_cast<float>(n[k]));
    for (int k = 0; k < 3; ++k) {
      const Vec3& v = mesh.vertices[tri[k]];
      for (int c = 0; c < 3; ++c) put_le_float(out, static_cast<float>(v[c]));
    }
    const char attr[2] = {0, 0};
    out.write(attr, 2);
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_stl_ascii(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "solid dentseg\n";
  char buf[128];
  for (const auto& tri : mesh.faces) {
    Vec3 n = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                 .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    const double len = n.norm();
    if (len > 0) n /= len;
    std::snprintf(buf, sizeof(buf), "  facet normal %.9g %.9g %.9g\n",
                  static_cast<float>(n[0]), static_cast<float>(n[1]), static_cast<float>(n[2]));
    out << buf << "    outer loop\n";
    for (int k = 0; k < 3; ++k) {
      const Vec3& v = mesh.vertices[tri[k]];
      std::snprintf(buf, sizeof(buf), "      vertex %.9g %.9g %.9g\n",
                    static_cast<float>(v[0]), static_cast<float>(v[1]), static_cast<float>(v[2]));
      out << buf;
    }
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid dentseg\n";
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  char buf[160];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  }
  for (const auto& tri : mesh.faces) {
    out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

TriangleMesh read_mesh(const std::filesystem::path& path, MeshFormat format,
                       std::vector<std::string>* warnings) {
  const std::string data = read_file(path);

  if (format == MeshFormat::kAuto) {
    if (path.extension() == ".obj") {
      format = MeshFormat::kObj;
    } else if (sniff_ascii_stl(data)) {
      // "solid" prefix plus parseable facets means ASCII; a binary file whose
      // header happens to start with "solid" falls through to the 84-byte path
      try {
        return parse_stl_ascii(path, data);
      } catch (const std::exception&) {
        format = MeshFormat::kStlBinary;
      }
    } else {
      format = MeshFormat::kStlBinary;
    }
  }

  TriangleMesh mesh;
  switch (format) {
    case MeshFormat::kStlBinary:
      mesh = parse_stl_binary(path, data);
      break;
    case MeshFormat::kStlAscii:
      mesh = parse_stl_ascii(path, data);
      break;
    case MeshFormat::kObj:
      mesh = parse_obj(path, data, warnings);
      break;
    case MeshFormat::kAuto:
      break;  // unreachable
  }
  mesh.validate();
  return mesh;
}

void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
                MeshFormat format) {
  mesh.validate();
  if (format == MeshFormat::kAuto) {
    format = path.extension() == ".obj" ? MeshFormat::kObj : MeshFormat::kStlBinary;
  }
  switch (format) {
    case MeshFormat::kStlBinary:
      write_stl_binary(mesh, path);
      break;
    case MeshFormat::kStlAscii:
      write_stl_ascii(mesh, path);
      break;
    case MeshFormat::kObj:
      write_obj(mesh, path);
      break;
    case MeshFormat::kAuto:
      break;  // unreachable
  }
}

LabelField read_labels(const std::filesystem::path& path, int n_cells) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": bad sidecar JSON: " + e.what());
  }
  const int cell_count = doc.at("cell_count").get<int>();
  const auto& raw = doc.at("labels");
  if (cell_count != static_cast<int>(raw.size())) {
    throw std::runtime_error(path.string() + ": sidecar cell_count " +
                             std::to_string(cell_count) + " does not match labels length " +
                             std::to_string(raw.size()));
  }
  if (n_cells != kAnyCellCount && cell_count != n_cells) {
    throw std::runtime_error(path.string() + ": sidecar has " + std::to_string(cell_count) +
                             " cells, mesh has " + std::to_string(n_cells));
  }
  LabelField labels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const int v = raw[i].get<int>();
    if (v < 0) {
      throw std::runtime_error(path.string() + ": negative label " + std::to_string(v) +
                               " at cell " + std::to_string(i));
    }
    labels[i] = clip_label(v);
  }
  return labels;
}

void write_labels(const LabelField& labels, const std::filesystem::path& path) {
  json doc;
  doc["format_version"] = 1;
  doc["cell_count"] = static_cast<int>(labels.size());
  doc["labels"] = labels;
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << doc.dump() << "\n";
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace dentseg
