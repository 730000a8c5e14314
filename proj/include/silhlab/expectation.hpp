#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "silhlab/rng.hpp"
#include "silhlab/silhouette.hpp"
#include "silhlab/util.hpp"

namespace silhlab {

struct BoundaryEdge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSampleCount : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exterior dihedral angle at an interior edge: the angle between the two
/// adjacent outward unit normals. 0 for coplanar neighbours, pi for a fold.
inline double exterior_dihedral(const TriangleMesh& mesh, const EdgeAdjacency& adj, int e) {
  const Edge& ed = adj.edges[static_cast<size_t>(e)];
  if (ed.face_right == EdgeAdjacency::kBoundaryFace)
    throw BoundaryEdge("edge " + std::to_string(e) + " is a boundary edge");
  return angle_between(face_normal(mesh, ed.face_left), face_normal(mesh, ed.face_right));
}

/// Per-edge exterior dihedrals; boundary edges carry -1.
struct EdgeAngleTable {
  std::vector<double> theta;
  bool is_boundary(int e) const { return theta[static_cast<size_t>(e)] < 0.0; }
};

inline EdgeAngleTable edge_angle_table(const TriangleMesh& mesh, const EdgeAdjacency& adj) {
  std::vector<Vec3> normals = unit_face_normals(mesh);
  EdgeAngleTable table;
  table.theta.resize(adj.edges.size());
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    const Edge& ed = adj.edges[e];
    if (ed.face_right == EdgeAdjacency::kBoundaryFace) {
      table.theta[e] = -1.0;
    } else {
      const Vec3& nl = normals[static_cast<size_t>(ed.face_left)];
      const Vec3& nr = normals[static_cast<size_t>(ed.face_right)];
      table.theta[e] = std::atan2(norm(cross(nl, nr)), dot(nl, nr));
    }
  }
  return table;
}

/// Expected silhouette size over uniform directions at infinity, computed in
/// closed form: an interior edge is on the silhouette for directions filling
/// solid measure 4*theta_e of the sphere's 4*pi, i.e. with probability
/// theta_e / pi; boundary edges are always on it.
inline double exact_expected_silhouette(const TriangleMesh& mesh, const EdgeAdjacency& adj) {
  EdgeAngleTable table = edge_angle_table(mesh, adj);
  double sum = 0;
  for (double t : table.theta)
    if (t >= 0.0) sum += t;
  return static_cast<double>(adj.n_boundary_edges) + sum / kPi;
}

/// Distribution of random viewpoints: uniform directions at infinity, or
/// uniform points in a solid ball.
struct ViewpointModel {
  enum class Kind { at_infinity, ball };
  Kind kind = Kind::at_infinity;
  Vec3 center{};
  double radius = 0;

  static ViewpointModel at_infinity() { return {}; }
  static ViewpointModel ball(const Vec3& c, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ViewpointModel: ball radius must be positive");
    return {Kind::ball, c, r};
  }
  std::string to_string() const {
    if (kind == Kind::at_infinity) return "inf";
    return "ball:" + fmt_g17(center.x) + "," + fmt_g17(center.y) + "," + fmt_g17(center.z) + "," +
           fmt_g17(radius);
  }
};

struct Estimate {
  double value = 0;
  double std_error = 0;
};

struct ExpectationReport {
  ViewpointModel model;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> exact;  // absent for ball models
  double mc_mean = 0;
  double mc_std_error = 0;
};

inline nlohmann::ordered_json to_json(const ExpectationReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model.to_string();
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  if (r.exact)
    j["exact"] = *r.exact;
  else
    j["exact"] = nullptr;
  j["mc_mean"] = r.mc_mean;
  j["mc_std_error"] = r.mc_std_error;
  return j;
}

namespace detail {

// Geometry reused across Monte-Carlo samples.
struct McContext {
  std::vector<Vec3> normals;    // unit
  std::vector<Vec3> centroids;
  std::vector<Vec3> edge_vecs;  // vertex b - vertex a per edge

  McContext(const TriangleMesh& mesh, const EdgeAdjacency& adj) {
    normals = unit_face_normals(mesh);
    centroids.resize(mesh.faces.size());
    for (size_t f = 0; f < mesh.faces.size(); ++f)
      centroids[f] = face_centroid(mesh, static_cast<int>(f));
    edge_vecs.resize(adj.edges.size());
    for (size_t e = 0; e < adj.edges.size(); ++e)
      edge_vecs[e] = mesh.vertices[static_cast<size_t>(adj.edges[e].b)] -
                     mesh.vertices[static_cast<size_t>(adj.edges[e].a)];
  }
};

// Classifies every face; front[] gets 1 for front-or-degenerate, 0 for back
// (the same tie-break as extract_silhouette). Returns true when a finite
// viewpoint lies exactly on a face, which callers must reject and resample.
inline bool classify_all(const TriangleMesh& mesh, const McContext& ctx, const Viewpoint& vp,
                         std::vector<signed char>& front) {
  bool on_mesh = false;
  bool finite = !vp.is_at_infinity();
  for (size_t f = 0; f < ctx.normals.size(); ++f) {
    double v = face_test_value(ctx.normals[f], ctx.centroids[f], vp);
    FaceSide side = side_of(v, kClassifyTol);
    if (finite && side == FaceSide::degenerate && v == 0.0 &&
        point_in_face(mesh, static_cast<int>(f), vp.point()))
      on_mesh = true;
    front[f] = counts_as_front(side) ? 1 : 0;
  }
  return on_mesh;
}

template <class EdgeFn>
inline void for_each_silhouette_edge(const EdgeAdjacency& adj, const std::vector<signed char>& front,
                                     EdgeFn&& fn) {
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    const Edge& ed = adj.edges[e];
    if (ed.face_right == EdgeAdjacency::kBoundaryFace ||
        front[static_cast<size_t>(ed.face_left)] != front[static_cast<size_t>(ed.face_right)])
      fn(static_cast<int>(e));
  }
}

inline Viewpoint draw_viewpoint(const ViewpointModel& model, Rng& rng) {
  if (model.kind == ViewpointModel::Kind::at_infinity)
    return Viewpoint::at_infinity(sample_direction_uniform(rng));
  return Viewpoint::finite(sample_ball_uniform(model.center, model.radius, rng));
}

// Draws the viewpoint for sample index i (stream i of the seed) and classifies
// the mesh, resampling within the stream while the point lands on the surface.
inline Viewpoint classified_sample(const TriangleMesh& mesh, const McContext& ctx,
                                   const ViewpointModel& model, std::uint64_t seed, std::int64_t i,
                                   std::vector<signed char>& front) {
  Rng rng(seed, static_cast<std::uint64_t>(i));
  for (;;) {
    Viewpoint vp = draw_viewpoint(model, rng);
    if (!classify_all(mesh, ctx, vp, front)) return vp;
  }
}

inline void require_samples(long long samples) {
  if (samples < 2) throw InvalidSampleCount("need at least 2 samples");
}

}  // namespace detail

/// Monte-Carlo estimate of the expected silhouette size. Deterministic for a
/// given seed regardless of thread count: sample i uses stream i, and the
/// integer counts are reduced exactly.
inline ExpectationReport mc_expected_silhouette(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                                                const ViewpointModel& model, long long samples,
                                                std::uint64_t seed, int threads = 0) {
  detail::require_samples(samples);
  detail::McContext ctx(mesh, adj);
  std::vector<std::int32_t> counts(static_cast<size_t>(samples));
  parallel_for(samples, threads, [&](std::int64_t begin, std::int64_t end) {
    std::vector<signed char> front(mesh.faces.size());
    for (std::int64_t i = begin; i < end; ++i) {
      detail::classified_sample(mesh, ctx, model, seed, i, front);
      std::int32_t c = 0;
      detail::for_each_silhouette_edge(adj, front, [&](int) { ++c; });
      counts[static_cast<size_t>(i)] = c;
    }
  });

  unsigned long long sum = 0, sum_sq = 0;
  for (std::int32_t c : counts) {
    sum += static_cast<unsigned long long>(c);
    sum_sq += static_cast<unsigned long long>(c) * static_cast<unsigned long long>(c);
  }
  auto n = static_cast<unsigned long long>(samples);
  // Unbiased variance from exact integer sums: (n*sum_sq - sum^2) / (n*(n-1)).
  auto num = static_cast<unsigned __int128>(n) * sum_sq - static_cast<unsigned __int128>(sum) * sum;
  double var = static_cast<double>(num) / (static_cast<double>(n) * static_cast<double>(n - 1));

  ExpectationReport report;
  report.model = model;
  report.samples = samples;
  report.seed = seed;
  if (model.kind == ViewpointModel::Kind::at_infinity)
    report.exact = exact_expected_silhouette(mesh, adj);
  report.mc_mean = static_cast<double>(sum) / static_cast<double>(n);
  report.mc_std_error = std::sqrt(var / static_cast<double>(n));
  return report;
}

/// Monte-Carlo mean of the projected silhouette length over uniform directions
/// at infinity. Per-sample values are stored and reduced sequentially, so the
/// result is independent of thread count.
inline Estimate mc_expected_silhouette_length(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                                              long long samples, std::uint64_t seed,
                                              int threads = 0) {
  detail::require_samples(samples);
  detail::McContext ctx(mesh, adj);
  ViewpointModel model = ViewpointModel::at_infinity();
  std::vector<double> values(static_cast<size_t>(samples));
  parallel_for(samples, threads, [&](std::int64_t begin, std::int64_t end) {
    std::vector<signed char> front(mesh.faces.size());
    for (std::int64_t i = begin; i < end; ++i) {
      Viewpoint vp = detail::classified_sample(mesh, ctx, model, seed, i, front);
      const Vec3& d = vp.direction().vec();
      double len = 0;
      detail::for_each_silhouette_edge(adj, front, [&](int e) {
        len += norm(cross(ctx.edge_vecs[static_cast<size_t>(e)], d));
      });
      values[static_cast<size_t>(i)] = len;
    }
  });

  double sum = 0;
  for (double v : values) sum += v;
  double mean = sum / static_cast<double>(samples);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double var = ss / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

/// Empirical per-edge silhouette frequencies under the model. Counts are
/// accumulated with atomic integer adds, so the result is exact and
/// independent of thread scheduling.
inline std::vector<double> mc_edge_frequencies(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                                               const ViewpointModel& model, long long samples,
                                               std::uint64_t seed, int threads = 0) {
  detail::require_samples(samples);
  detail::McContext ctx(mesh, adj);
  std::vector<std::atomic<std::uint32_t>> counts(adj.edges.size());
  for (auto& c : counts) c.store(0, std::memory_order_relaxed);
  parallel_for(samples, threads, [&](std::int64_t begin, std::int64_t end) {
    std::vector<signed char> front(mesh.faces.size());
    for (std::int64_t i = begin; i < end; ++i) {
      detail::classified_sample(mesh, ctx, model, seed, i, front);
      detail::for_each_silhouette_edge(adj, front, [&](int e) {
        counts[static_cast<size_t>(e)].fetch_add(1, std::memory_order_relaxed);
      });
    }
  });
  std::vector<double> freq(adj.edges.size());
  for (size_t e = 0; e < freq.size(); ++e)
    freq[e] = static_cast<double>(counts[e].load()) / static_cast<double>(samples);
  return freq;
}

/// Probability that edge e lies on the silhouette. Closed form where one
/// exists (boundary edges: 1; directions at infinity: theta_e / pi), else a
/// Monte-Carlo estimate with its standard error.
inline Estimate edge_silhouette_probability(const TriangleMesh& mesh, const EdgeAdjacency& adj, int e,
                                            const ViewpointModel& model, long long samples = 10000,
                                            std::uint64_t seed = 0) {
  const Edge& ed = adj.edges[static_cast<size_t>(e)];
  if (ed.face_right == EdgeAdjacency::kBoundaryFace) return {1.0, 0.0};
  if (model.kind == ViewpointModel::Kind::at_infinity)
    return {exterior_dihedral(mesh, adj, e) / kPi, 0.0};

  detail::require_samples(samples);
  Direction nl = face_normal(mesh, ed.face_left);
  Direction nr = face_normal(mesh, ed.face_right);
  Vec3 cl = face_centroid(mesh, ed.face_left);
  Vec3 cr = face_centroid(mesh, ed.face_right);
  long long hits = 0;
  for (long long i = 0; i < samples; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    Viewpoint vp = Viewpoint::finite(sample_ball_uniform(model.center, model.radius, rng));
    bool lf = detail::counts_as_front(side_of(face_test_value(nl.vec(), cl, vp)));
    bool rf = detail::counts_as_front(side_of(face_test_value(nr.vec(), cr, vp)));
    if (lf != rf) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples - 1));
  return {p, se};
}

}  // namespace silhlab
