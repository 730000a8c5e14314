#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "silhlab/geom.hpp"

namespace silhlab {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonManifoldEdge : MeshError {
  using MeshError::MeshError;
};
struct InconsistentOrientation : MeshError {
  using MeshError::MeshError;
};
struct DegenerateFace : MeshError {
  using MeshError::MeshError;
};

/// A face is degenerate when area <= this factor times its longest edge squared.
inline constexpr double kDegenerateAreaFactor = 1e-12;

/// Indexed triangle mesh. Faces are CCW as seen from outside; orientation is
/// required of the input and never repaired.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

struct Edge {
  int a = -1, b = -1;  // vertex ids, a < b
  int face_left = -1;  // face traversing a->b (the only face, for boundary edges)
  int face_right = -1; // face traversing b->a, or kBoundaryFace
  double length = 0;
};

/// Edges in canonical order: sorted by (a, b). Independent of face input order.
struct EdgeAdjacency {
  static constexpr int kBoundaryFace = -1;
  std::vector<Edge> edges;
  int n_boundary_edges = 0;

  bool is_boundary(int e) const { return edges[static_cast<size_t>(e)].face_right == kBoundaryFace; }

  /// Index of edge {a, b} (order-insensitive), or -1.
  int find_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                               [](const Edge& e, const std::pair<int, int>& k) {
                                 return e.a != k.first ? e.a < k.first : e.b < k.second;
                               });
    if (it == edges.end() || it->a != a || it->b != b) return -1;
    return static_cast<int>(it - edges.begin());
  }
};

struct MeshStats {
  int n_faces = 0;
  int n_vertices = 0;
  int n_edges = 0;
  int n_boundary_edges = 0;
  double min_edge_length = 0;
  double max_edge_length = 0;
  double min_height = 0;   // smallest triangle height over all faces
  double min_fatness = 0;  // smallest height / longest edge, minimized over faces
  int euler_characteristic = 0;
};

namespace detail {

inline void check_face_indices(const TriangleMesh& mesh, size_t f) {
  const auto& fc = mesh.faces[f];
  int nv = static_cast<int>(mesh.vertices.size());
  for (int k = 0; k < 3; ++k) {
    if (fc[static_cast<size_t>(k)] < 0 || fc[static_cast<size_t>(k)] >= nv)
      throw MeshError("face " + std::to_string(f) + ": vertex index out of range");
  }
  if (fc[0] == fc[1] || fc[1] == fc[2] || fc[0] == fc[2])
    throw DegenerateFace("face " + std::to_string(f) + ": repeated vertex");
}

}  // namespace detail

inline Vec3 face_raw_normal(const TriangleMesh& mesh, int f) {
  const auto& fc = mesh.faces[static_cast<size_t>(f)];
  const Vec3& a = mesh.vertices[static_cast<size_t>(fc[0])];
  const Vec3& b = mesh.vertices[static_cast<size_t>(fc[1])];
  const Vec3& c = mesh.vertices[static_cast<size_t>(fc[2])];
  return cross(b - a, c - a);
}

inline double face_longest_edge(const TriangleMesh& mesh, int f) {
  const auto& fc = mesh.faces[static_cast<size_t>(f)];
  const Vec3& a = mesh.vertices[static_cast<size_t>(fc[0])];
  const Vec3& b = mesh.vertices[static_cast<size_t>(fc[1])];
  const Vec3& c = mesh.vertices[static_cast<size_t>(fc[2])];
  return std::sqrt(std::max({norm2(b - a), norm2(c - b), norm2(a - c)}));
}

inline double face_area(const TriangleMesh& mesh, int f) {
  return 0.5 * norm(face_raw_normal(mesh, f));
}

inline void require_non_degenerate(const TriangleMesh& mesh, int f) {
  double lmax = face_longest_edge(mesh, f);
  if (face_area(mesh, f) <= kDegenerateAreaFactor * lmax * lmax)
    throw DegenerateFace("face " + std::to_string(f) + ": degenerate (area below tolerance)");
}

/// Outward unit normal of face f (right-hand rule on the CCW vertex order).
inline Direction face_normal(const TriangleMesh& mesh, int f) {
  require_non_degenerate(mesh, f);
  return Direction(face_raw_normal(mesh, f));
}

/// Unit normals for every face in one pass.
inline std::vector<Vec3> unit_face_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> normals(mesh.faces.size());
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    require_non_degenerate(mesh, static_cast<int>(f));
    Vec3 n = face_raw_normal(mesh, static_cast<int>(f));
    normals[f] = n / norm(n);
  }
  return normals;
}

inline Vec3 face_centroid(const TriangleMesh& mesh, int f) {
  const auto& fc = mesh.faces[static_cast<size_t>(f)];
  return (mesh.vertices[static_cast<size_t>(fc[0])] + mesh.vertices[static_cast<size_t>(fc[1])] +
          mesh.vertices[static_cast<size_t>(fc[2])]) /
         3.0;
}

/// Smallest of the three triangle heights: 2 * area / longest edge.
inline double smallest_height(const TriangleMesh& mesh, int f) {
  require_non_degenerate(mesh, f);
  return 2.0 * face_area(mesh, f) / face_longest_edge(mesh, f);
}

/// Builds the edge table. Throws NonManifoldEdge when an edge has more than
/// two incident faces and InconsistentOrientation when two faces traverse an
/// edge in the same direction.
inline EdgeAdjacency build_adjacency(const TriangleMesh& mesh) {
  struct Slot {
    int face_left = EdgeAdjacency::kBoundaryFace;
    int face_right = EdgeAdjacency::kBoundaryFace;
    int count = 0;
  };
  std::unordered_map<std::uint64_t, Slot> slots;
  slots.reserve(mesh.faces.size() * 2);

  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };

  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    detail::check_face_indices(mesh, f);
    const auto& fc = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      int u = fc[static_cast<size_t>(k)];
      int v = fc[static_cast<size_t>((k + 1) % 3)];
      int a = std::min(u, v), b = std::max(u, v);
      Slot& s = slots[key(a, b)];
      if (s.count >= 2)
        throw NonManifoldEdge("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              "): more than two incident faces");
      int& slot_side = (u == a) ? s.face_left : s.face_right;
      if (slot_side != EdgeAdjacency::kBoundaryFace)
        throw InconsistentOrientation("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                      "): traversed twice in the same direction");
      slot_side = static_cast<int>(f);
      ++s.count;
    }
  }

  EdgeAdjacency adj;
  adj.edges.reserve(slots.size());
  for (const auto& [k, s] : slots) {
    Edge e;
    e.a = static_cast<int>(k >> 32);
    e.b = static_cast<int>(k & 0xffffffffu);
    e.face_left = s.face_left;
    e.face_right = s.face_right;
    if (s.count == 1) {
      // Boundary: keep the single face in face_left whichever way it runs.
      if (e.face_left == EdgeAdjacency::kBoundaryFace) std::swap(e.face_left, e.face_right);
      ++adj.n_boundary_edges;
    }
    e.length = norm(mesh.vertices[static_cast<size_t>(e.b)] - mesh.vertices[static_cast<size_t>(e.a)]);
    adj.edges.push_back(e);
  }
  std::sort(adj.edges.begin(), adj.edges.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  return adj;
}

/// Structural validation plus summary statistics.
inline MeshStats validate(const TriangleMesh& mesh) {
  for (const Vec3& v : mesh.vertices)
    if (!is_finite(v)) throw MeshError("non-finite vertex coordinate");
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    detail::check_face_indices(mesh, f);
    require_non_degenerate(mesh, static_cast<int>(f));
  }
  EdgeAdjacency adj = build_adjacency(mesh);

  MeshStats st;
  st.n_faces = static_cast<int>(mesh.faces.size());
  st.n_vertices = static_cast<int>(mesh.vertices.size());
  st.n_edges = static_cast<int>(adj.edges.size());
  st.n_boundary_edges = adj.n_boundary_edges;
  st.euler_characteristic = st.n_vertices - st.n_edges + st.n_faces;
  if (!adj.edges.empty()) {
    double lo = adj.edges[0].length, hi = adj.edges[0].length;
    for (const Edge& e : adj.edges) {
      lo = std::min(lo, e.length);
      hi = std::max(hi, e.length);
    }
    st.min_edge_length = lo;
    st.max_edge_length = hi;
  }
  if (!mesh.faces.empty()) {
    double hmin = smallest_height(mesh, 0);
    double fat = hmin / face_longest_edge(mesh, 0);
    for (int f = 1; f < st.n_faces; ++f) {
      double h = smallest_height(mesh, f);
      hmin = std::min(hmin, h);
      fat = std::min(fat, h / face_longest_edge(mesh, f));
    }
    st.min_height = hmin;
    st.min_fatness = fat;
  }
  return st;
}

}  // namespace silhlab
