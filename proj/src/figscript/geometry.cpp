// SPDX-License-Identifier: Apache-2.0
#include "figr/figscript/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace figr::figscript {
namespace {

constexpr double kParallelTol = 1e-12;
constexpr double kParamTol = 1e-12;
constexpr double kDedupTol = 1e-9;

IntersectResult finish(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Vec2> out;
  for (auto p : pts)
    if (out.empty() || norm(p - out.back()) > kDedupTol) out.push_back(p);
  return {std::move(out), std::nullopt};
}

IntersectResult domain(std::string why) { return {{}, std::move(why)}; }

bool parallel(Vec2 d1, Vec2 d2) noexcept {
  return std::abs(cross(d1, d2)) <= kParallelTol * norm(d1) * norm(d2);
}

// Parameters (t along p + t*d1, u along q + u*d2) of the crossing of two
// non-parallel carrier lines.
std::pair<double, double> crossing_params(Vec2 p, Vec2 d1, Vec2 q, Vec2 d2) noexcept {
  const double denom = cross(d1, d2);
  const Vec2 w = q - p;
  return {cross(w, d2) / denom, cross(w, d1) / denom};
}

bool in_unit(double t) noexcept { return t >= -kParamTol && t <= 1.0 + kParamTol; }

// Points of circle ∩ carrier line of (a, b), with their parameters along a->b.
std::vector<std::pair<double, Vec2>> circle_line_points(const Circle2& c, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double dd = dot(d, d);
  const double t0 = dot(c.center - a, d) / dd;
  const Vec2 foot = a + t0 * d;
  const Vec2 off = foot - c.center;
  const double dist2 = dot(off, off);
  const double r2 = c.radius * c.radius;
  const double h2 = r2 - dist2;
  if (std::abs(h2) <= 1e-12 * r2) return {{t0, foot}};
  if (h2 < 0) return {};
  const double dt = std::sqrt(h2 / dd);
  return {{t0 - dt, a + (t0 - dt) * d}, {t0 + dt, a + (t0 + dt) * d}};
}

}  // namespace

double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }

IntersectResult intersect(const Line2& l, const Line2& m) {
  const Vec2 d1 = l.b - l.a;
  const Vec2 d2 = m.b - m.a;
  if (parallel(d1, d2)) return domain("lines are parallel");
  const auto [t, u] = crossing_params(l.a, d1, m.a, d2);
  (void)u;
  return finish({l.a + t * d1});
}

IntersectResult intersect(const Segment2& s, const Segment2& t) {
  const Vec2 d1 = s.b - s.a;
  const Vec2 d2 = t.b - t.a;
  if (parallel(d1, d2)) return domain("segments are parallel");
  const auto [ts, ut] = crossing_params(s.a, d1, t.a, d2);
  if (!in_unit(ts) || !in_unit(ut)) return finish({});
  return finish({s.a + ts * d1});
}

IntersectResult intersect(const Line2& l, const Segment2& s) {
  const Vec2 d1 = l.b - l.a;
  const Vec2 d2 = s.b - s.a;
  if (parallel(d1, d2)) return domain("line and segment are parallel");
  const auto [t, u] = crossing_params(l.a, d1, s.a, d2);
  if (!in_unit(u)) return finish({});
  return finish({l.a + t * d1});
}

IntersectResult intersect(const Circle2& c, const Line2& l) {
  std::vector<Vec2> pts;
  for (const auto& [t, p] : circle_line_points(c, l.a, l.b)) pts.push_back(p);
  return finish(std::move(pts));
}

IntersectResult intersect(const Circle2& c, const Segment2& s) {
  std::vector<Vec2> pts;
  for (const auto& [t, p] : circle_line_points(c, s.a, s.b))
    if (in_unit(t)) pts.push_back(p);
  return finish(std::move(pts));
}

IntersectResult intersect(const Circle2& c, const Circle2& d) {
  const Vec2 delta = d.center - c.center;
  const double dist = norm(delta);
  if (dist == 0.0) return domain("circles are concentric");
  const double r0 = c.radius, r1 = d.radius;
  const double a = (dist * dist + r0 * r0 - r1 * r1) / (2 * dist);
  const double h2 = r0 * r0 - a * a;
  const Vec2 base = c.center + (a / dist) * delta;
  if (std::abs(h2) <= 1e-12 * r0 * r0) return finish({base});
  if (h2 < 0) return finish({});
  const double h = std::sqrt(h2);
  const Vec2 perp{-delta.y / dist, delta.x / dist};
  return finish({base + h * perp, base - h * perp});
}

std::size_t count_crossings(std::span<const Segment2> segments) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      const auto r = intersect(segments[i], segments[j]);
      if (!r.domain_error && !r.points.empty()) ++count;
    }
  return count;
}

double polygon_area(std::span<const Vec2> polygon) noexcept {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % polygon.size()];
    twice += cross(a, b);
  }
  return std::abs(twice) / 2.0;
}

double lattice_scan_cost(std::span<const Vec2> polygon) noexcept {
  if (polygon.empty()) return 0.0;
  double xmin = polygon[0].x, xmax = xmin, ymin = polygon[0].y, ymax = ymin;
  for (auto p : polygon) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return (std::floor(xmax) - std::ceil(xmin) + 1) * (std::floor(ymax) - std::ceil(ymin) + 1);
}

std::size_t count_interior_lattice_points(std::span<const Vec2> polygon) {
  if (polygon.size() < 3) return 0;
  double xmin = polygon[0].x, xmax = xmin, ymin = polygon[0].y, ymax = ymin;
  for (auto p : polygon) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  std::size_t count = 0;
  for (double y = std::ceil(ymin); y <= std::floor(ymax); y += 1.0) {
    for (double x = std::ceil(xmin); x <= std::floor(xmax); x += 1.0) {
      const Vec2 q{x, y};
      bool on_edge = false;
      bool inside = false;
      for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
        const Vec2 a = polygon[j];
        const Vec2 b = polygon[i];
        const Vec2 ab = b - a;
        const double len = norm(ab);
        if (len > 0 && std::abs(cross(ab, q - a)) / len <= 1e-9 && dot(q - a, q - b) <= 1e-9) {
          on_edge = true;
          break;
        }
        if ((a.y > q.y) != (b.y > q.y)) {
          const double xc = a.x + (q.y - a.y) * ab.x / ab.y;
          if (q.x < xc) inside = !inside;
        }
      }
      if (inside && !on_edge) ++count;
    }
  }
  return count;
}

double point_line_distance(Vec2 p, const Line2& l) noexcept {
  const Vec2 d = l.b - l.a;
  return std::abs(cross(d, p - l.a)) / norm(d);
}

double angle_degrees(Vec2 a, Vec2 b, Vec2 c) noexcept {
  const Vec2 u = a - b;
  const Vec2 v = c - b;
  return std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / std::numbers::pi;
}

}  // namespace figr::figscript
