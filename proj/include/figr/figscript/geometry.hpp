// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace figr::figscript {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

double dot(Vec2 a, Vec2 b) noexcept;
double cross(Vec2 a, Vec2 b) noexcept;
double norm(Vec2 a) noexcept;

struct Line2 {
  Vec2 a, b;  // two distinct points on the line
};
struct Segment2 {
  Vec2 a, b;
};
struct Circle2 {
  Vec2 center;
  double radius = 0.0;
};
using Polygon2 = std::vector<Vec2>;

/// Either a set of points or a reason the query has no well-defined answer
/// (parallel lines, concentric circles). Points are sorted lexicographically.
struct IntersectResult {
  std::vector<Vec2> points;
  std::optional<std::string> domain_error;
};

IntersectResult intersect(const Line2& l, const Line2& m);
IntersectResult intersect(const Segment2& s, const Segment2& t);
IntersectResult intersect(const Line2& l, const Segment2& s);
IntersectResult intersect(const Circle2& c, const Line2& l);
IntersectResult intersect(const Circle2& c, const Segment2& s);
IntersectResult intersect(const Circle2& c, const Circle2& d);

/// Pairs (i < j) of segments sharing at least one point; parallel pairs count 0.
std::size_t count_crossings(std::span<const Segment2> segments);

double polygon_area(std::span<const Vec2> polygon) noexcept;
/// Integer points strictly inside; points within 1e-9 of an edge are excluded.
std::size_t count_interior_lattice_points(std::span<const Vec2> polygon);
/// Number of lattice points the scan in count_interior_lattice_points visits.
double lattice_scan_cost(std::span<const Vec2> polygon) noexcept;

double point_line_distance(Vec2 p, const Line2& l) noexcept;
/// Angle ABC in degrees, in [0, 180].
double angle_degrees(Vec2 a, Vec2 b, Vec2 c) noexcept;

}  // namespace figr::figscript
