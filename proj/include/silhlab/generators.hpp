#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "silhlab/mesh.hpp"
#include "silhlab/surfaces.hpp"

namespace silhlab {

struct Icosphere {
  int level = 1;  // subdivision level; 0 is the icosahedron
};
struct UVSphere {
  int n_lat = 8;
  int n_lon = 16;
};
struct CylinderUniform {
  int slices = 16;
  int rings = 8;
  bool capped = true;
};
struct OpenCylinderSection {
  int slices = 16;
  int rings = 8;
};
struct SchwarzLantern {
  int slices = 8;  // vertices per ring
  int rings = 8;   // bands along the axis
};
struct CylinderStrips {
  int strips = 8;  // axial fold pairs; 2*strips creases in total
};

using FamilySpec =
    std::variant<Icosphere, UVSphere, CylinderUniform, OpenCylinderSection, SchwarzLantern, CylinderStrips>;

struct Generated {
  TriangleMesh mesh;
  AnalyticSurface surface;
};

inline long long face_count(const FamilySpec& spec) {
  struct Visitor {
    long long operator()(const Icosphere& s) const { return 20LL << (2 * s.level); }
    long long operator()(const UVSphere& s) const { return 2LL * s.n_lon * (s.n_lat - 1); }
    long long operator()(const CylinderUniform& s) const {
      return 2LL * s.slices * s.rings + (s.capped ? 2LL * s.slices : 0);
    }
    long long operator()(const OpenCylinderSection& s) const { return 2LL * s.slices * s.rings; }
    long long operator()(const SchwarzLantern& s) const { return 2LL * s.slices * s.rings; }
    long long operator()(const CylinderStrips& s) const { return 4LL * s.strips; }
  };
  return std::visit(Visitor{}, spec);
}

namespace detail {

inline void require_range(bool ok, const std::string& msg) {
  if (!ok) throw InvalidSpec(msg);
}

inline TriangleMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : m.vertices) v = v / norm(v);
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
             {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return m;
}

inline TriangleMesh generate_icosphere(const Icosphere& spec) {
  require_range(spec.level >= 0 && spec.level <= 9, "icosphere level must be in [0, 9]");
  TriangleMesh mesh = icosahedron();
  for (int l = 0; l < spec.level; ++l) {
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(mesh.faces.size() * 2);
    auto mid = [&](int a, int b) {
      std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::min(a, b))) << 32) |
                          static_cast<std::uint32_t>(std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 p = mesh.vertices[static_cast<size_t>(a)] + mesh.vertices[static_cast<size_t>(b)];
      p = p / norm(p);  // back onto the unit sphere
      int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(p);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> faces;
    faces.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(faces);
  }
  return mesh;
}

inline TriangleMesh generate_uvsphere(const UVSphere& spec) {
  require_range(spec.n_lat >= 2, "uvsphere needs n_lat >= 2");
  require_range(spec.n_lon >= 3, "uvsphere needs n_lon >= 3");
  int nlat = spec.n_lat, nlon = spec.n_lon;
  TriangleMesh m;
  int north = 0, south = 1;
  m.vertices.push_back({0, 0, 1});
  m.vertices.push_back({0, 0, -1});
  auto ring_vertex = [&](int i, int j) {  // i in [1, nlat-1], j wraps
    return 2 + (i - 1) * nlon + (j % nlon);
  };
  for (int i = 1; i < nlat; ++i) {
    double theta = kPi * static_cast<double>(i) / nlat;
    for (int j = 0; j < nlon; ++j) {
      double phi = 2.0 * kPi * static_cast<double>(j) / nlon;
      m.vertices.push_back(
          {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
    }
  }
  for (int j = 0; j < nlon; ++j) m.faces.push_back({north, ring_vertex(1, j), ring_vertex(1, j + 1)});
  for (int i = 1; i + 1 < nlat; ++i) {
    for (int j = 0; j < nlon; ++j) {
      int a = ring_vertex(i, j), b = ring_vertex(i, j + 1);
      int c = ring_vertex(i + 1, j + 1), d = ring_vertex(i + 1, j);
      m.faces.push_back({a, c, b});
      m.faces.push_back({a, d, c});
    }
  }
  for (int j = 0; j < nlon; ++j)
    m.faces.push_back({south, ring_vertex(nlat - 1, j + 1), ring_vertex(nlat - 1, j)});
  return m;
}

// Lateral wall of the unit-radius cylinder, z in [-1, 1]; shared by the
// uniform cylinder and the open section.
inline TriangleMesh cylinder_wall(int slices, int rings) {
  TriangleMesh m;
  auto vertex = [&](int i, int j) { return j * slices + (i % slices); };
  for (int j = 0; j <= rings; ++j) {
    double z = -1.0 + 2.0 * static_cast<double>(j) / rings;
    for (int i = 0; i < slices; ++i) {
      double phi = 2.0 * kPi * static_cast<double>(i) / slices;
      m.vertices.push_back({std::cos(phi), std::sin(phi), z});
    }
  }
  for (int j = 0; j < rings; ++j) {
    for (int i = 0; i < slices; ++i) {
      int a = vertex(i, j), b = vertex(i + 1, j);
      int c = vertex(i + 1, j + 1), d = vertex(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

inline TriangleMesh generate_cylinder(const CylinderUniform& spec) {
  require_range(spec.slices >= 3, "cylinder needs slices >= 3");
  require_range(spec.rings >= 1, "cylinder needs rings >= 1");
  TriangleMesh m = cylinder_wall(spec.slices, spec.rings);
  if (spec.capped) {
    int bottom_center = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0, 0, -1});
    int top_center = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0, 0, 1});
    auto vertex = [&](int i, int j) { return j * spec.slices + (i % spec.slices); };
    for (int i = 0; i < spec.slices; ++i) {
      m.faces.push_back({bottom_center, vertex(i + 1, 0), vertex(i, 0)});
      m.faces.push_back({top_center, vertex(i, spec.rings), vertex(i + 1, spec.rings)});
    }
  }
  return m;
}

// Antiprism bands: ring j is rotated by (j % 2) * pi / slices, so each chord
// of one ring faces a vertex of the next and the triangles flatten toward
// horizontal as rings grow dense.
inline TriangleMesh generate_lantern(const SchwarzLantern& spec) {
  require_range(spec.slices >= 3, "lantern needs slices >= 3");
  require_range(spec.rings >= 1, "lantern needs rings >= 1");
  int k = spec.slices, mrings = spec.rings;
  TriangleMesh m;
  auto vertex = [&](int j, int i) { return j * k + (i % k); };
  for (int j = 0; j <= mrings; ++j) {
    double z = -1.0 + 2.0 * static_cast<double>(j) / mrings;
    double offset = (j % 2) * kPi / k;
    for (int i = 0; i < k; ++i) {
      double phi = 2.0 * kPi * static_cast<double>(i) / k + offset;
      m.vertices.push_back({std::cos(phi), std::sin(phi), z});
    }
  }
  for (int j = 0; j < mrings; ++j) {
    for (int i = 0; i < k; ++i) {
      if (j % 2 == 0) {
        m.faces.push_back({vertex(j, i), vertex(j, i + 1), vertex(j + 1, i)});
        m.faces.push_back({vertex(j, i + 1), vertex(j + 1, i + 1), vertex(j + 1, i)});
      } else {
        m.faces.push_back({vertex(j, i), vertex(j, i + 1), vertex(j + 1, i + 1)});
        m.faces.push_back({vertex(j, i), vertex(j + 1, i + 1), vertex(j + 1, i)});
      }
    }
  }
  return m;
}

// Full-height axial strips folded in and out: 2*strips creases at alternating
// radii 1 +- 0.5/strips. Crease dihedrals stay bounded away from zero while
// per-face distance to the unit cylinder is O(1/strips).
inline TriangleMesh generate_strips(const CylinderStrips& spec) {
  require_range(spec.strips >= 2, "strips needs strips >= 2");
  int s = spec.strips;
  int lines = 2 * s;
  double bulge = 0.5 / s;
  TriangleMesh m;
  auto bottom = [&](int i) { return 2 * (i % lines); };
  auto top = [&](int i) { return 2 * (i % lines) + 1; };
  for (int i = 0; i < lines; ++i) {
    double phi = kPi * static_cast<double>(i) / s;
    double r = 1.0 + (i % 2 == 0 ? bulge : -bulge);
    m.vertices.push_back({r * std::cos(phi), r * std::sin(phi), -1});
    m.vertices.push_back({r * std::cos(phi), r * std::sin(phi), 1});
  }
  for (int i = 0; i < lines; ++i) {
    m.faces.push_back({bottom(i), bottom(i + 1), top(i + 1)});
    m.faces.push_back({bottom(i), top(i + 1), top(i)});
  }
  return m;
}

}  // namespace detail

/// Builds the mesh together with the smooth surface it approximates.
inline Generated generate(const FamilySpec& spec) {
  struct Visitor {
    Generated operator()(const Icosphere& s) const {
      return {detail::generate_icosphere(s), AnalyticSurface::sphere(1.0)};
    }
    Generated operator()(const UVSphere& s) const {
      return {detail::generate_uvsphere(s), AnalyticSurface::sphere(1.0)};
    }
    Generated operator()(const CylinderUniform& s) const {
      return {detail::generate_cylinder(s), AnalyticSurface::cylinder(1.0, 1.0, s.capped)};
    }
    Generated operator()(const OpenCylinderSection& s) const {
      detail::require_range(s.slices >= 3, "cylsec needs slices >= 3");
      detail::require_range(s.rings >= 1, "cylsec needs rings >= 1");
      return {detail::cylinder_wall(s.slices, s.rings), AnalyticSurface::open_cylinder_section(1.0, 1.0)};
    }
    Generated operator()(const SchwarzLantern& s) const {
      return {detail::generate_lantern(s), AnalyticSurface::open_cylinder_section(1.0, 1.0)};
    }
    Generated operator()(const CylinderStrips& s) const {
      return {detail::generate_strips(s), AnalyticSurface::open_cylinder_section(1.0, 1.0)};
    }
  };
  return std::visit(Visitor{}, spec);
}

/// Spec strings: icosphere:L | uvsphere:LAT,LON | cyl:S,R[,caps|nocaps] |
/// cylsec:S,R | lantern:K,M | strips:S.
inline FamilySpec parse_family_spec(const std::string& text) {
  size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw InvalidSpec("family spec needs 'name:args': " + text);
  std::string name = text.substr(0, colon);
  std::vector<std::string> args;
  size_t pos = colon + 1;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    args.push_back(text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  auto arg_int = [&](size_t i) {
    try {
      size_t used = 0;
      int v = std::stoi(args.at(i), &used);
      if (used != args.at(i).size()) throw std::invalid_argument(args.at(i));
      return v;
    } catch (const std::exception&) {
      throw InvalidSpec("bad integer argument in family spec: " + text);
    }
  };
  auto expect_args = [&](size_t n) {
    if (args.size() != n) throw InvalidSpec("wrong number of arguments in family spec: " + text);
  };

  if (name == "icosphere") {
    expect_args(1);
    return Icosphere{arg_int(0)};
  }
  if (name == "uvsphere") {
    expect_args(2);
    return UVSphere{arg_int(0), arg_int(1)};
  }
  if (name == "cyl") {
    if (args.size() == 2) return CylinderUniform{arg_int(0), arg_int(1), true};
    expect_args(3);
    if (args[2] == "caps") return CylinderUniform{arg_int(0), arg_int(1), true};
    if (args[2] == "nocaps") return CylinderUniform{arg_int(0), arg_int(1), false};
    throw InvalidSpec("third cylinder argument must be caps or nocaps: " + text);
  }
  if (name == "cylsec") {
    expect_args(2);
    return OpenCylinderSection{arg_int(0), arg_int(1)};
  }
  if (name == "lantern") {
    expect_args(2);
    return SchwarzLantern{arg_int(0), arg_int(1)};
  }
  if (name == "strips") {
    expect_args(1);
    return CylinderStrips{arg_int(0)};
  }
  throw InvalidSpec("unknown family '" + name + "'");
}

inline std::string format_family_spec(const FamilySpec& spec) {
  struct Visitor {
    std::string operator()(const Icosphere& s) const { return "icosphere:" + std::to_string(s.level); }
    std::string operator()(const UVSphere& s) const {
      return "uvsphere:" + std::to_string(s.n_lat) + "," + std::to_string(s.n_lon);
    }
    std::string operator()(const CylinderUniform& s) const {
      return "cyl:" + std::to_string(s.slices) + "," + std::to_string(s.rings) +
             (s.capped ? ",caps" : ",nocaps");
    }
    std::string operator()(const OpenCylinderSection& s) const {
      return "cylsec:" + std::to_string(s.slices) + "," + std::to_string(s.rings);
    }
    std::string operator()(const SchwarzLantern& s) const {
      return "lantern:" + std::to_string(s.slices) + "," + std::to_string(s.rings);
    }
    std::string operator()(const CylinderStrips& s) const { return "strips:" + std::to_string(s.strips); }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace silhlab
