#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "silhlab/mesh.hpp"

namespace silhlab {

struct ViewpointMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FaceSide { front, back, degenerate };

/// Signed visibility test value: positive means the face fronts the viewpoint.
/// At infinity it is dot(normal, direction); for a finite viewpoint it is the
/// cosine of the angle between the normal and the centroid-to-viewpoint ray,
/// so one classification tolerance serves both cases.
inline double face_test_value(const Vec3& unit_normal, const Vec3& centroid, const Viewpoint& vp) {
  if (vp.is_at_infinity()) return dot(unit_normal, vp.direction().vec());
  Vec3 to_view = vp.point() - centroid;
  double len = norm(to_view);
  if (len == 0.0) return 0.0;
  return dot(unit_normal, to_view) / len;
}

inline FaceSide side_of(double value, double tol = kClassifyTol) {
  if (value > tol) return FaceSide::front;
  if (value < -tol) return FaceSide::back;
  return FaceSide::degenerate;
}

inline FaceSide classify_face(const TriangleMesh& mesh, int f, const Viewpoint& vp,
                              double tol = kClassifyTol) {
  Direction n = face_normal(mesh, f);
  return side_of(face_test_value(n.vec(), face_centroid(mesh, f), vp), tol);
}

namespace detail {

// Degenerate classifications resolve to front, so the edge rule below sees
// only two states and every tie-break is applied identically everywhere.
inline bool counts_as_front(FaceSide s) { return s != FaceSide::back; }

inline bool point_in_face(const TriangleMesh& mesh, int f, const Vec3& p) {
  const auto& fc = mesh.faces[static_cast<size_t>(f)];
  const Vec3& a = mesh.vertices[static_cast<size_t>(fc[0])];
  Vec3 e0 = mesh.vertices[static_cast<size_t>(fc[1])] - a;
  Vec3 e1 = mesh.vertices[static_cast<size_t>(fc[2])] - a;
  Vec3 w = p - a;
  double d00 = dot(e0, e0), d01 = dot(e0, e1), d11 = dot(e1, e1);
  double det = d00 * d11 - d01 * d01;
  if (det == 0.0) return false;
  double s = (dot(w, e0) * d11 - dot(w, e1) * d01) / det;
  double t = (dot(w, e1) * d00 - dot(w, e0) * d01) / det;
  const double eps = 1e-12;
  return s >= -eps && t >= -eps && s + t <= 1.0 + eps;
}

}  // namespace detail

struct SilhouetteResult {
  explicit SilhouetteResult(const Viewpoint& vp) : viewpoint(vp) {}
  Viewpoint viewpoint;
  std::vector<int> edge_ids;  // ascending edge indices into the adjacency
  int n_interior = 0;
  int n_boundary = 0;
  int n_degenerate_faces = 0;
  bool viewpoint_on_mesh = false;  // finite viewpoint lies exactly on a face
  std::optional<double> projected_length;  // only for viewpoints at infinity
};

/// Length of the silhouette projected along d: sum over silhouette edges of
/// |cross(edge_vector, d)|, which equals edge_length * sin(angle(edge, d)).
inline double projected_length(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                               const SilhouetteResult& result, const Direction& d) {
  if (!result.viewpoint.is_at_infinity())
    throw ViewpointMismatch("projected length requires a viewpoint at infinity");
  const Vec3& rd = result.viewpoint.direction().vec();
  const Vec3& dd = d.vec();
  if (std::abs(rd.x - dd.x) > 1e-12 || std::abs(rd.y - dd.y) > 1e-12 || std::abs(rd.z - dd.z) > 1e-12)
    throw ViewpointMismatch("direction differs from the one the silhouette was extracted for");
  double total = 0;
  for (int e : result.edge_ids) {
    const Edge& ed = adj.edges[static_cast<size_t>(e)];
    Vec3 ev = mesh.vertices[static_cast<size_t>(ed.b)] - mesh.vertices[static_cast<size_t>(ed.a)];
    total += norm(cross(ev, dd));
  }
  return total;
}

/// Transparent silhouette: every boundary edge, plus every interior edge whose
/// two faces classify to opposite sides. Degenerate-on-both-sides edges are
/// excluded by the front tie-break.
inline SilhouetteResult extract_silhouette(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                                           const Viewpoint& vp, double tol = kClassifyTol) {
  std::vector<Vec3> normals = unit_face_normals(mesh);
  std::vector<signed char> front(mesh.faces.size());
  SilhouetteResult result(vp);
  bool finite = !vp.is_at_infinity();
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    double v = face_test_value(normals[f], face_centroid(mesh, static_cast<int>(f)), vp);
    FaceSide side = side_of(v, tol);
    if (side == FaceSide::degenerate) {
      ++result.n_degenerate_faces;
      if (finite && v == 0.0 && detail::point_in_face(mesh, static_cast<int>(f), vp.point()))
        result.viewpoint_on_mesh = true;
    }
    front[f] = detail::counts_as_front(side) ? 1 : 0;
  }
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    const Edge& ed = adj.edges[e];
    if (ed.face_right == EdgeAdjacency::kBoundaryFace) {
      result.edge_ids.push_back(static_cast<int>(e));
      ++result.n_boundary;
    } else if (front[static_cast<size_t>(ed.face_left)] != front[static_cast<size_t>(ed.face_right)]) {
      result.edge_ids.push_back(static_cast<int>(e));
      ++result.n_interior;
    }
  }
  if (vp.is_at_infinity())
    result.projected_length = projected_length(mesh, adj, result, vp.direction());
  return result;
}

}  // namespace silhlab
