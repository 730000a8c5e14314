#pragma once

#include <string>
#include <vector>

#include "silhlab/silhouette.hpp"
#include "silhlab/util.hpp"

namespace silhlab {

/// Orthographic wireframe along d: all edges light grey, silhouette edges
/// heavy black on top. Deterministic output for identical inputs.
inline std::string emit_svg(const TriangleMesh& mesh, const EdgeAdjacency& adj,
                            const SilhouetteResult& result, const Direction& d) {
  if (!result.viewpoint.is_at_infinity())
    throw ViewpointMismatch("SVG projection requires a viewpoint at infinity");
  auto [u, v] = orthonormal_frame(d);

  std::vector<double> px(mesh.vertices.size()), py(mesh.vertices.size());
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    px[i] = dot(mesh.vertices[i], u.vec());
    py[i] = -dot(mesh.vertices[i], v.vec());  // SVG y grows downward
    if (i == 0) {
      xmin = xmax = px[i];
      ymin = ymax = py[i];
    } else {
      xmin = std::min(xmin, px[i]);
      xmax = std::max(xmax, px[i]);
      ymin = std::min(ymin, py[i]);
      ymax = std::max(ymax, py[i]);
    }
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (span <= 0) span = 1;
  double margin = 0.05 * span;
  double w = xmax - xmin + 2 * margin, h = ymax - ymin + 2 * margin;

  auto g6 = [](double x) { return fmt_g(x, 6); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"";
  s += g6(xmin - margin) + " " + g6(ymin - margin) + " " + g6(w) + " " + g6(h);
  s += "\" width=\"800\" height=\"" + g6(800.0 * h / w) + "\">\n";

  auto line = [&](int a, int b) {
    s += "    <line x1=\"" + g6(px[static_cast<size_t>(a)]) + "\" y1=\"" +
         g6(py[static_cast<size_t>(a)]) + "\" x2=\"" + g6(px[static_cast<size_t>(b)]) + "\" y2=\"" +
         g6(py[static_cast<size_t>(b)]) + "\"/>\n";
  };
  // Every edge in the light group; silhouette edges drawn again, heavy, on top.
  s += "  <g stroke=\"#bbbbbb\" stroke-width=\"" + g6(0.002 * span) +
       "\" stroke-linecap=\"round\" fill=\"none\">\n";
  for (const Edge& ed : adj.edges) line(ed.a, ed.b);
  s += "  </g>\n";
  s += "  <g stroke=\"#000000\" stroke-width=\"" + g6(0.006 * span) +
       "\" stroke-linecap=\"round\" fill=\"none\">\n";
  for (int e : result.edge_ids) {
    const Edge& ed = adj.edges[static_cast<size_t>(e)];
    line(ed.a, ed.b);
  }
  s += "  </g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace silhlab
