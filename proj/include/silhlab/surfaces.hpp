#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "silhlab/geom.hpp"
#include "silhlab/util.hpp"

namespace silhlab {

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ClosestPointResult {
  Vec3 point{};
  double distance = 0;
  /// Set when the nearest point is not unique (query on the medial axis);
  /// the returned point is then one deterministic representative.
  bool ambiguous = false;
};

/// Smooth reference surfaces, all centered at the origin with the z axis as
/// the axis of symmetry. Half heights, not full heights, parameterize the
/// cylinders: z runs over [-half_height, half_height].
struct AnalyticSurface {
  enum class Kind { sphere, cylinder, open_cylinder_section, torus, saucer_disk };

  Kind kind = Kind::sphere;
  double radius = 1;         // sphere, cylinders
  double half_height = 1;    // cylinders
  bool capped = true;        // cylinder only
  double major_radius = 2;   // torus
  double minor_radius = 0.5; // torus
  double radial_extent = 1;  // saucer_disk
  double exponent = 0.125;   // saucer_disk: z = (x^2 + y^2)^exponent

  static AnalyticSurface sphere(double r) {
    require_positive(r, "sphere radius");
    AnalyticSurface s;
    s.kind = Kind::sphere;
    s.radius = r;
    return s;
  }
  static AnalyticSurface cylinder(double r, double half_height, bool capped) {
    require_positive(r, "cylinder radius");
    require_positive(half_height, "cylinder half height");
    AnalyticSurface s;
    s.kind = Kind::cylinder;
    s.radius = r;
    s.half_height = half_height;
    s.capped = capped;
    return s;
  }
  static AnalyticSurface open_cylinder_section(double r, double half_height) {
    require_positive(r, "cylinder radius");
    require_positive(half_height, "cylinder half height");
    AnalyticSurface s;
    s.kind = Kind::open_cylinder_section;
    s.radius = r;
    s.half_height = half_height;
    return s;
  }
  static AnalyticSurface torus(double major, double minor) {
    require_positive(major, "torus major radius");
    require_positive(minor, "torus minor radius");
    if (!(minor < major)) throw InvalidSpec("torus needs minor radius < major radius");
    AnalyticSurface s;
    s.kind = Kind::torus;
    s.major_radius = major;
    s.minor_radius = minor;
    return s;
  }
  static AnalyticSurface saucer_disk(double radial_extent, double exponent = 0.125) {
    require_positive(radial_extent, "saucer radial extent");
    if (!(exponent > 0.0) || !(exponent < 0.5))
      throw InvalidSpec("saucer exponent must lie in (0, 0.5)");
    AnalyticSurface s;
    s.kind = Kind::saucer_disk;
    s.radial_extent = radial_extent;
    s.exponent = exponent;
    return s;
  }

  bool has_boundary() const {
    return kind == Kind::open_cylinder_section || kind == Kind::saucer_disk ||
           (kind == Kind::cylinder && !capped);
  }

  /// Mean silhouette length over uniform directions, where known in closed
  /// form: 2*pi*r for the sphere.
  std::optional<double> silhouette_avg_length() const {
    if (kind == Kind::sphere) return 2.0 * kPi * radius;
    return std::nullopt;
  }

  /// Smallest radius of normal curvature, used to sanity-check that queried
  /// points are well inside the tubular neighbourhood where the nearest-point
  /// map is single-valued. Unbounded curvature (saucer apex): no value.
  std::optional<double> min_curvature_radius() const {
    switch (kind) {
      case Kind::sphere: return radius;
      case Kind::cylinder:
      case Kind::open_cylinder_section: return radius;
      case Kind::torus: return minor_radius;
      case Kind::saucer_disk: return std::nullopt;
    }
    return std::nullopt;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::sphere: return "sphere:r=" + fmt_g17(radius);
      case Kind::cylinder:
        return "cylinder:r=" + fmt_g17(radius) + ",h=" + fmt_g17(half_height) +
               ",caps=" + (capped ? "true" : "false");
      case Kind::open_cylinder_section:
        return "cylsec:r=" + fmt_g17(radius) + ",h=" + fmt_g17(half_height);
      case Kind::torus:
        return "torus:R=" + fmt_g17(major_radius) + ",r=" + fmt_g17(minor_radius);
      case Kind::saucer_disk: return "saucer:rext=" + fmt_g17(radial_extent);
    }
    return {};
  }

  static AnalyticSurface parse(const std::string& spec);

 private:
  static void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw InvalidSpec(std::string(what) + " must be positive");
  }
};

namespace detail {

inline bool near_tie(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::min(a, b)); }

inline ClosestPointResult closest_on_sphere(const AnalyticSurface& s, const Vec3& q) {
  double n = norm(q);
  if (n == 0.0) return {{s.radius, 0, 0}, s.radius, true};
  Vec3 p = q * (s.radius / n);
  return {p, norm(q - p), false};
}

// Lateral wall plus, when capped, the two disk caps. Candidates are compared
// by true distance; the first minimal candidate in a fixed order (top cap,
// bottom cap, wall) wins, and any near-tie marks the result ambiguous.
inline ClosestPointResult closest_on_cylinder(const AnalyticSurface& s, const Vec3& q) {
  double rho = std::hypot(q.x, q.y);
  bool on_axis = rho == 0.0;
  Vec3 u = on_axis ? Vec3{1, 0, 0} : Vec3{q.x / rho, q.y / rho, 0};

  std::vector<std::pair<Vec3, bool>> candidates;  // point, inherently ambiguous
  if (s.capped) {
    double rc = std::min(rho, s.radius);
    candidates.push_back({rc * u + Vec3{0, 0, s.half_height}, false});
    candidates.push_back({rc * u + Vec3{0, 0, -s.half_height}, false});
  }
  double zl = std::clamp(q.z, -s.half_height, s.half_height);
  candidates.push_back({s.radius * u + Vec3{0, 0, zl}, on_axis});

  ClosestPointResult best;
  double best_d = std::numeric_limits<double>::infinity();
  bool tie = false;
  for (const auto& [p, amb] : candidates) {
    double d = norm(q - p);
    if (d < best_d) {
      // A strictly better candidate supersedes any earlier tie unless it is
      // itself within tolerance of the old best.
      tie = std::isfinite(best_d) && near_tie(d, best_d);
      best = {p, d, amb};
      best_d = d;
    } else if (near_tie(d, best_d)) {
      tie = true;
    }
  }
  if (tie) best.ambiguous = true;
  return best;
}

inline ClosestPointResult closest_on_torus(const AnalyticSurface& s, const Vec3& q) {
  double rho = std::hypot(q.x, q.y);
  if (rho == 0.0) {
    // On the axis every meridian is equally near; answer in the x-z plane.
    Vec3 tube_center{s.major_radius, 0, 0};
    Vec3 v = Vec3{0, 0, q.z} - tube_center;
    double vn = norm(v);
    Vec3 p = tube_center + v * (s.minor_radius / vn);
    return {p, norm(Vec3{0, 0, q.z} - p), true};
  }
  Vec3 u{q.x / rho, q.y / rho, 0};
  Vec3 tube_center = s.major_radius * u;
  Vec3 v = q - tube_center;
  double vn = norm(v);
  if (vn == 0.0) {
    // On the core circle: every point of the meridian circle is nearest.
    return {tube_center + s.minor_radius * u, s.minor_radius, true};
  }
  Vec3 p = tube_center + v * (s.minor_radius / vn);
  return {p, norm(q - p), false};
}

// Saucer profile in the meridian half-plane: z(t) = t^(2*exponent) for
// t in [0, radial_extent]. The squared distance g(t) from (t0, z0) is scanned
// on a dense grid, then the bracketed stationary point is polished with a
// bisection-guarded Newton iteration on g'.
inline ClosestPointResult closest_on_saucer(const AnalyticSurface& s, const Vec3& q) {
  double t0 = std::hypot(q.x, q.y), z0 = q.z;
  double p = 2.0 * s.exponent;
  auto zf = [&](double t) { return std::pow(t, p); };
  auto g = [&](double t) {
    double dz = zf(t) - z0;
    return (t - t0) * (t - t0) + dz * dz;
  };
  auto dg = [&](double t) {
    return 2.0 * (t - t0) + 2.0 * (zf(t) - z0) * p * std::pow(t, p - 1.0);
  };

  constexpr int kGrid = 256;
  double best_t = 0, best_g = g(0);
  std::array<double, kGrid + 1> ts{};
  for (int i = 0; i <= kGrid; ++i) {
    double t = s.radial_extent * static_cast<double>(i) / kGrid;
    ts[static_cast<size_t>(i)] = t;
    double gi = g(t);
    if (gi < best_g) {
      best_g = gi;
      best_t = t;
    }
  }
  // Refine every bracket with a derivative sign change; the objective can
  // have two local minima (queries inside the evolute). t = 0 has an infinite
  // profile slope, so the bracket floor stays strictly positive.
  for (int i = 0; i < kGrid; ++i) {
    double lo = std::max(ts[static_cast<size_t>(i)], 1e-300);
    double hi = ts[static_cast<size_t>(i + 1)];
    double dlo = dg(lo), dhi = dg(hi);
    if (!(dlo < 0.0 && dhi > 0.0)) continue;
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
      double d1 = dg(t);
      if (d1 < 0.0)
        lo = t;
      else
        hi = t;
      double d2 = 2.0 + 2.0 * p * p * std::pow(t, 2.0 * (p - 1.0)) +
                  2.0 * (zf(t) - z0) * p * (p - 1.0) * std::pow(t, p - 2.0);
      double step = t - d1 / d2;
      t = (d2 > 0.0 && step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    if (g(t) < best_g) {
      best_g = g(t);
      best_t = t;
    }
  }

  bool on_axis = t0 == 0.0;
  Vec3 u = on_axis ? Vec3{1, 0, 0} : Vec3{q.x / t0, q.y / t0, 0};
  Vec3 point = best_t * u + Vec3{0, 0, zf(best_t)};
  return {point, std::sqrt(std::max(0.0, best_g)), on_axis && best_t > 0.0};
}

}  // namespace detail

/// Nearest point of the surface to q, its distance, and an ambiguity flag for
/// medial-axis queries. distance always equals |q - point|.
inline ClosestPointResult closest_point(const AnalyticSurface& s, const Vec3& q) {
  switch (s.kind) {
    case AnalyticSurface::Kind::sphere: return detail::closest_on_sphere(s, q);
    case AnalyticSurface::Kind::cylinder: return detail::closest_on_cylinder(s, q);
    case AnalyticSurface::Kind::open_cylinder_section: {
      AnalyticSurface lateral = s;
      lateral.kind = AnalyticSurface::Kind::cylinder;
      lateral.capped = false;
      return detail::closest_on_cylinder(lateral, q);
    }
    case AnalyticSurface::Kind::torus: return detail::closest_on_torus(s, q);
    case AnalyticSurface::Kind::saucer_disk: return detail::closest_on_saucer(s, q);
  }
  throw std::logic_error("unreachable");
}

inline AnalyticSurface AnalyticSurface::parse(const std::string& spec) {
  size_t colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidSpec("surface spec needs 'kind:key=value,...': " + spec);
  std::string kind = spec.substr(0, colon);
  std::vector<std::pair<std::string, std::string>> kv;
  size_t pos = colon + 1;
  while (pos <= spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string item = spec.substr(pos, comma == std::string::npos ? spec.size() - pos : comma - pos);
    size_t eq = item.find('=');
    if (item.empty() || eq == std::string::npos || eq == 0)
      throw InvalidSpec("bad surface parameter '" + item + "' in: " + spec);
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  auto value = [&](const std::string& key) -> std::string {
    for (auto& [k, v] : kv)
      if (k == key) return v;
    throw InvalidSpec("surface spec missing '" + key + "': " + spec);
  };
  auto number = [&](const std::string& key) {
    std::string v = value(key);
    try {
      size_t used = 0;
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw InvalidSpec("bad number '" + v + "' for '" + key + "' in: " + spec);
    }
  };
  auto known_keys = [&](std::initializer_list<const char*> keys) {
    for (auto& [k, v] : kv) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) throw InvalidSpec("unknown surface parameter '" + k + "' in: " + spec);
    }
  };

  if (kind == "sphere") {
    known_keys({"r"});
    return sphere(number("r"));
  }
  if (kind == "cylinder") {
    known_keys({"r", "h", "caps"});
    std::string caps = value("caps");
    if (caps != "true" && caps != "false") throw InvalidSpec("caps must be true or false: " + spec);
    return cylinder(number("r"), number("h"), caps == "true");
  }
  if (kind == "cylsec") {
    known_keys({"r", "h"});
    return open_cylinder_section(number("r"), number("h"));
  }
  if (kind == "torus") {
    known_keys({"R", "r"});
    return torus(number("R"), number("r"));
  }
  if (kind == "saucer") {
    known_keys({"rext"});
    return saucer_disk(number("rext"));
  }
  throw InvalidSpec("unknown surface kind '" + kind + "'");
}

}  // namespace silhlab
