#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "silhlab/mesh.hpp"
#include "silhlab/surfaces.hpp"

namespace silhlab {

struct InsufficientReports : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Scale-free witnesses of the mesh-quality hypotheses, measured against the
/// reference surface with n = face count:
///   alpha_n   = min edge length * sqrt(n)         (edge lengths not too short)
///   beta_n    = max d(x, surface) * sqrt(n) / h(x) (distance small next to the
///               local feature size h, the smallest height of the triangles
///               containing x)
///   gamma_n   = max d(x, surface) * n              (distance O(1/n))
///   fatness_n = min smallest height / longest edge  (no thin triangles)
struct HypothesisReport {
  int n = 0;
  double alpha_n = 0;
  double beta_n = 0;
  double gamma_n = 0;
  double fatness_n = 0;
  int grid_depth = 0;
  bool closest_point_caveat = false;  // some sample left the safe tubular neighbourhood
  double max_distance = 0;
  double min_h_sqrt_n = 0;  // extremes of h(x) * sqrt(n) over the samples
  double max_h_sqrt_n = 0;
};

/// Samples each face on the barycentric grid of the given depth
/// ((depth+1)(depth+2)/2 points per face) and measures the witnesses. At a
/// point shared by several triangles, h(x) is the minimum over all of them.
inline HypothesisReport measure_hypotheses(const TriangleMesh& mesh, const AnalyticSurface& surface,
                                           int grid_depth = 4) {
  if (grid_depth < 1) throw std::invalid_argument("measure_hypotheses: grid depth must be >= 1");
  if (mesh.faces.empty()) throw std::invalid_argument("measure_hypotheses: empty mesh");
  EdgeAdjacency adj = build_adjacency(mesh);
  const int n = static_cast<int>(mesh.faces.size());
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  std::vector<double> face_h(mesh.faces.size());
  for (int f = 0; f < n; ++f) face_h[static_cast<size_t>(f)] = smallest_height(mesh, f);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> vertex_h(mesh.vertices.size(), inf);
  for (int f = 0; f < n; ++f)
    for (int v : mesh.faces[static_cast<size_t>(f)])
      vertex_h[static_cast<size_t>(v)] = std::min(vertex_h[static_cast<size_t>(v)], face_h[static_cast<size_t>(f)]);
  std::vector<double> edge_h(adj.edges.size());
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    const Edge& ed = adj.edges[e];
    double h = face_h[static_cast<size_t>(ed.face_left)];
    if (ed.face_right != EdgeAdjacency::kBoundaryFace)
      h = std::min(h, face_h[static_cast<size_t>(ed.face_right)]);
    edge_h[e] = h;
  }

  HypothesisReport rep;
  rep.n = n;
  rep.grid_depth = grid_depth;
  rep.min_h_sqrt_n = inf;

  double min_edge = inf, fatness = inf;
  for (const Edge& e : adj.edges) min_edge = std::min(min_edge, e.length);
  for (int f = 0; f < n; ++f)
    fatness = std::min(fatness, face_h[static_cast<size_t>(f)] / face_longest_edge(mesh, f));
  rep.alpha_n = min_edge * sqrt_n;
  rep.fatness_n = fatness;

  const int g = grid_depth;
  for (int f = 0; f < n; ++f) {
    const auto& fc = mesh.faces[static_cast<size_t>(f)];
    const Vec3& a = mesh.vertices[static_cast<size_t>(fc[0])];
    const Vec3& b = mesh.vertices[static_cast<size_t>(fc[1])];
    const Vec3& c = mesh.vertices[static_cast<size_t>(fc[2])];
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; j <= g - i; ++j) {
        int k = g - i - j;
        Vec3 x = (static_cast<double>(i) * a + static_cast<double>(j) * b + static_cast<double>(k) * c) /
                 static_cast<double>(g);
        double h;
        int zeros = (i == 0) + (j == 0) + (k == 0);
        if (zeros == 2) {  // a corner of the face
          int v = i > 0 ? fc[0] : (j > 0 ? fc[1] : fc[2]);
          h = vertex_h[static_cast<size_t>(v)];
        } else if (zeros == 1) {  // interior of one of the face's edges
          int u = i == 0 ? fc[1] : fc[0];
          int v = k == 0 ? fc[1] : fc[2];
          h = edge_h[static_cast<size_t>(adj.find_edge(u, v))];
        } else {
          h = face_h[static_cast<size_t>(f)];
        }
        double d = closest_point(surface, x).distance;
        rep.beta_n = std::max(rep.beta_n, d * sqrt_n / h);
        rep.gamma_n = std::max(rep.gamma_n, d * static_cast<double>(n));
        rep.max_distance = std::max(rep.max_distance, d);
        rep.min_h_sqrt_n = std::min(rep.min_h_sqrt_n, h * sqrt_n);
        rep.max_h_sqrt_n = std::max(rep.max_h_sqrt_n, h * sqrt_n);
      }
    }
  }

  if (auto reach = surface.min_curvature_radius())
    rep.closest_point_caveat = rep.max_distance > 0.5 * *reach;
  else
    rep.closest_point_caveat = true;  // curvature unbounded: no safe neighbourhood known
  return rep;
}

struct CertificationConfig {
  double alpha_floor = 0.05;
  double fatness_floor = 0.2;
  /// A decreasing witness fails when the last three reports decrease
  /// monotonically and the oldest exceeds slack times the newest (mirrored
  /// for increasing witnesses).
  double trend_slack = 1.25;
};

struct FamilyCertificate {
  std::vector<HypothesisReport> reports;
  double alpha_inf = 0;    // smallest alpha_n
  double beta_sup = 0;     // largest beta_n
  double gamma_sup = 0;    // largest gamma_n
  double fatness_inf = 0;  // smallest fatness_n
  bool pass = false;
  int failed_hypothesis = 0;  // 1..4, or 0 when pass
  int witness_n = 0;          // n of the report that triggered the failure
};

namespace detail {

inline bool trend_decreasing(const std::vector<double>& w, double slack) {
  size_t k = w.size();
  double a = w[k - 3], b = w[k - 2], c = w[k - 1];
  return a > b && b > c && a > slack * c;
}

inline bool trend_increasing(const std::vector<double>& w, double slack) {
  size_t k = w.size();
  double a = w[k - 3], b = w[k - 2], c = w[k - 1];
  return a < b && b < c && c > slack * a;
}

}  // namespace detail

/// Decides whether the reports are consistent with all four hypotheses.
/// Floor-backed checks (alpha, fatness) run before trend checks (beta, gamma),
/// so a family failing several names a witness with an absolute threshold.
inline FamilyCertificate certify_family(const std::vector<HypothesisReport>& reports,
                                        const CertificationConfig& config = {}) {
  if (reports.size() < 3)
    throw InsufficientReports("certification needs at least 3 reports, got " +
                              std::to_string(reports.size()));
  for (size_t i = 1; i < reports.size(); ++i)
    if (reports[i].n <= reports[i - 1].n)
      throw InsufficientReports("reports must have strictly increasing n");

  FamilyCertificate cert;
  cert.reports = reports;
  std::vector<double> alphas, betas, gammas, fatnesses;
  for (const auto& r : reports) {
    alphas.push_back(r.alpha_n);
    betas.push_back(r.beta_n);
    gammas.push_back(r.gamma_n);
    fatnesses.push_back(r.fatness_n);
  }
  cert.alpha_inf = *std::min_element(alphas.begin(), alphas.end());
  cert.beta_sup = *std::max_element(betas.begin(), betas.end());
  cert.gamma_sup = *std::max_element(gammas.begin(), gammas.end());
  cert.fatness_inf = *std::min_element(fatnesses.begin(), fatnesses.end());

  auto fail = [&](int hypothesis, int witness) {
    cert.pass = false;
    cert.failed_hypothesis = hypothesis;
    cert.witness_n = witness;
  };
  auto first_below = [&](const std::vector<double>& w, double floor) {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] < floor) return reports[i].n;
    return reports.back().n;
  };

  int last_n = reports.back().n;
  if (cert.alpha_inf < config.alpha_floor) {
    fail(1, first_below(alphas, config.alpha_floor));
  } else if (detail::trend_decreasing(alphas, config.trend_slack)) {
    fail(1, last_n);
  } else if (cert.fatness_inf < config.fatness_floor) {
    fail(3, first_below(fatnesses, config.fatness_floor));
  } else if (detail::trend_decreasing(fatnesses, config.trend_slack)) {
    fail(3, last_n);
  } else if (detail::trend_increasing(betas, config.trend_slack)) {
    fail(2, last_n);
  } else if (detail::trend_increasing(gammas, config.trend_slack)) {
    fail(4, last_n);
  } else {
    cert.pass = true;
  }
  return cert;
}

inline std::string to_string(const FamilyCertificate& cert) {
  if (cert.pass) return "PASS";
  return "FAIL(hypothesis " + std::to_string(cert.failed_hypothesis) +
         ", n=" + std::to_string(cert.witness_n) + ")";
}

inline nlohmann::ordered_json to_json(const HypothesisReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["alpha_n"] = r.alpha_n;
  j["beta_n"] = r.beta_n;
  j["gamma_n"] = r.gamma_n;
  j["fatness_n"] = r.fatness_n;
  j["grid_depth"] = r.grid_depth;
  j["closest_point_caveat"] = r.closest_point_caveat;
  j["max_distance"] = r.max_distance;
  j["min_h_sqrt_n"] = r.min_h_sqrt_n;
  j["max_h_sqrt_n"] = r.max_h_sqrt_n;
  return j;
}

inline nlohmann::ordered_json to_json(const FamilyCertificate& cert) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(cert);
  j["pass"] = cert.pass;
  j["failed_hypothesis"] = cert.failed_hypothesis;
  j["witness_n"] = cert.witness_n;
  j["alpha_inf"] = cert.alpha_inf;
  j["beta_sup"] = cert.beta_sup;
  j["gamma_sup"] = cert.gamma_sup;
  j["fatness_inf"] = cert.fatness_inf;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : cert.reports) j["reports"].push_back(to_json(r));
  return j;
}

/// CSV of per-report witness rows.
inline std::string hypothesis_csv(const std::vector<HypothesisReport>& reports) {
  std::string out = "n,alpha,beta,gamma,fatness\n";
  for (const auto& r : reports) {
    out += std::to_string(r.n);
    out += ',';
    out += fmt_g17(r.alpha_n);
    out += ',';
    out += fmt_g17(r.beta_n);
    out += ',';
    out += fmt_g17(r.gamma_n);
    out += ',';
    out += fmt_g17(r.fatness_n);
    out += '\n';
  }
  return out;
}

}  // namespace silhlab
