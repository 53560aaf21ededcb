// SPDX-License-Identifier: Apache-2.0
#include "figr/evalbench/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "figr/util/rng.hpp"
#include "figr/util/text.hpp"

namespace figr::evalbench {

using figscript::Vec2;

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::SegmentCrossings: return "segment_crossings";
    case Category::CircleLineHits: return "circle_line_hits";
    case Category::PolygonLatticePoints: return "polygon_lattice_points";
    case Category::ArithmeticNoFigure: return "arithmetic_no_figure";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view name) noexcept {
  for (Category c : {Category::SegmentCrossings, Category::CircleLineHits, Category::PolygonLatticePoints,
                     Category::ArithmeticNoFigure})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

namespace {

using I = std::int64_t;

I ix(double v) { return static_cast<I>(std::llround(v)); }

std::string pt(Vec2 p) { return fmt::format("({},{})", ix(p.x), ix(p.y)); }
std::string spt(Vec2 p) { return fmt::format("({}, {})", ix(p.x), ix(p.y)); }

I orient(Vec2 a, Vec2 b, Vec2 c) {
  const I v = (ix(b.x) - ix(a.x)) * (ix(c.y) - ix(a.y)) - (ix(b.y) - ix(a.y)) * (ix(c.x) - ix(a.x));
  return (v > 0) - (v < 0);
}

bool within_box(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const I o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return (o1 == 0 && within_box(a, b, c)) || (o2 == 0 && within_box(a, b, d)) || (o3 == 0 && within_box(c, d, a)) ||
         (o4 == 0 && within_box(c, d, b));
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a, ap = p - a;
  const double len2 = figscript::dot(ab, ab);
  const double t = len2 == 0 ? 0.0 : std::clamp(figscript::dot(ap, ab) / len2, 0.0, 1.0);
  return figscript::norm(p - (a + t * ab));
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) { return orient(a, b, p) == 0 && within_box(a, b, p); }

// Even-odd test with exact integer comparisons; boundary points count as outside.
bool strictly_inside(const std::vector<Vec2>& poly, I px, I py) {
  const Vec2 p{static_cast<double>(px), static_cast<double>(py)};
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[j], b = poly[i];
    if (on_segment(a, b, p)) return false;
    const I ay = ix(a.y), by = ix(b.y);
    if ((ay > py) == (by > py)) continue;
    // px < ax + (py - ay)(bx - ax)/(by - ay)
    const I lhs = (px - ix(a.x)) * (by - ay), rhs = (py - ay) * (ix(b.x) - ix(a.x));
    if (by > ay ? lhs < rhs : lhs > rhs) inside = !inside;
  }
  return inside;
}

I apply(I x, char op, I y) {
  switch (op) {
    case '+': return x + y;
    case '-': return x - y;
    default: return x * y;
  }
}

int precedence(char op) { return op == '*' ? 2 : 1; }

// Reads signed integers and the arithmetic operators in order.
struct Scanner {
  std::string_view s;
  std::size_t i = 0;

  std::optional<I> next_int() {
    while (i < s.size() && !(std::isdigit(static_cast<unsigned char>(s[i])) ||
                             (s[i] == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))))
      ++i;
    if (i >= s.size()) return std::nullopt;
    bool neg = false;
    if (s[i] == '-') {
      neg = true;
      ++i;
    }
    I v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i++] - '0');
      if (v > 1'000'000'000) return std::nullopt;
    }
    return neg ? -v : v;
  }
};

std::optional<Vec2> next_point(Scanner& sc) {
  const auto x = sc.next_int();
  if (!x) return std::nullopt;
  const auto y = sc.next_int();
  if (!y) return std::nullopt;
  return Vec2{static_cast<double>(*x), static_cast<double>(*y)};
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (poly[i] == poly[j]) return false;
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Vec2 a = poly[i], b = poly[(i + 1) % n], c = poly[j], d = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges meet only at the shared vertex; reject folding back.
        const Vec2 shared = j == i + 1 ? b : a;
        const Vec2 u = j == i + 1 ? a : b, v = j == i + 1 ? d : c;
        if (orient(u, shared, v) == 0 && figscript::dot(u - shared, v - shared) > 0) return false;
        continue;
      }
      if (segments_meet(a, b, c, d)) return false;
    }
  return true;
}

double twice_area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) s += figscript::cross(poly[j], poly[i]);
  return s;
}

Scene make_segments(Rng& rng) {
  Scene sc;
  sc.category = Category::SegmentCrossings;
  while (true) {
    sc.segments.clear();
    const auto m = rng.uniform_int(3, 5);
    for (int i = 0; i < m; ++i) {
      Vec2 a, b;
      do {
        a = {static_cast<double>(rng.uniform_int(0, 10)), static_cast<double>(rng.uniform_int(0, 10))};
        b = {static_cast<double>(rng.uniform_int(0, 10)), static_cast<double>(rng.uniform_int(0, 10))};
      } while (figscript::norm(b - a) < 3.0);
      sc.segments.emplace_back(a, b);
    }
    bool ok = true;
    for (std::size_t i = 0; i < sc.segments.size() && ok; ++i)
      for (std::size_t j = 0; j < sc.segments.size() && ok; ++j) {
        if (i == j) continue;
        const auto [a, b] = sc.segments[i];
        const auto [c, d] = sc.segments[j];
        ok = point_segment_distance(c, a, b) >= 0.3 && point_segment_distance(d, a, b) >= 0.3;
      }
    if (ok) return sc;
  }
}

Scene make_circle_line(Rng& rng) {
  Scene sc;
  sc.category = Category::CircleLineHits;
  while (true) {
    sc.center = {static_cast<double>(rng.uniform_int(-4, 4)), static_cast<double>(rng.uniform_int(-4, 4))};
    sc.radius = rng.uniform_int(2, 5);
    sc.p = {static_cast<double>(rng.uniform_int(-8, 8)), static_cast<double>(rng.uniform_int(-8, 8))};
    sc.q = {static_cast<double>(rng.uniform_int(-8, 8)), static_cast<double>(rng.uniform_int(-8, 8))};
    if (sc.p == sc.q) continue;
    const double dist = figscript::point_line_distance(sc.center, {sc.p, sc.q});
    if (std::fabs(dist - static_cast<double>(sc.radius)) >= 0.3) return sc;
  }
}

Scene make_polygon(Rng& rng) {
  Scene sc;
  sc.category = Category::PolygonLatticePoints;
  constexpr double kTau = 6.283185307179586;
  while (true) {
    const auto n = rng.uniform_int(3, 6);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& t : angles) t = rng.uniform(0, kTau);
    std::sort(angles.begin(), angles.end());
    const Vec2 c{static_cast<double>(rng.uniform_int(0, 4)), static_cast<double>(rng.uniform_int(0, 4))};
    sc.polygon.clear();
    for (double t : angles) {
      const double r = rng.uniform(2.0, 6.0);
      sc.polygon.push_back({std::round(c.x + r * std::cos(t)), std::round(c.y + r * std::sin(t))});
    }
    if (twice_area(sc.polygon) < 0) std::reverse(sc.polygon.begin(), sc.polygon.end());
    if (std::fabs(twice_area(sc.polygon)) >= 4 && polygon_is_simple(sc.polygon)) return sc;
  }
}

Scene make_arithmetic(Rng& rng) {
  Scene sc;
  sc.category = Category::ArithmeticNoFigure;
  static constexpr char kOps[] = {'+', '-', '*'};
  while (true) {
    sc.a = rng.uniform_int(2, 20);
    sc.b = rng.uniform_int(2, 20);
    sc.c = rng.uniform_int(2, 20);
    sc.op1 = kOps[rng.uniform_int(0, 2)];
    sc.op2 = kOps[rng.uniform_int(0, 2)];
    sc.grouped = rng.bernoulli(0.5);
    if (sc.a != sc.b && oracle_answer(sc) != std::abs(sc.a - sc.b)) return sc;
  }
}

}  // namespace

std::string question_for(const Scene& sc) {
  switch (sc.category) {
    case Category::SegmentCrossings: {
      std::string s = "Segments: ";
      for (std::size_t i = 0; i < sc.segments.size(); ++i) {
        if (i) s += "; ";
        s += pt(sc.segments[i].first) + "-" + pt(sc.segments[i].second);
      }
      return s + ". How many pairs of these segments cross each other?";
    }
    case Category::CircleLineHits:
      return fmt::format("Circle: center {}, radius {}. Line through {} and {}. "
                         "How many points do the circle and the line have in common?",
                         pt(sc.center), sc.radius, pt(sc.p), pt(sc.q));
    case Category::PolygonLatticePoints: {
      std::string s = "Polygon: ";
      for (std::size_t i = 0; i < sc.polygon.size(); ++i) {
        if (i) s += ", ";
        s += pt(sc.polygon[i]);
      }
      return s + ". How many lattice points lie strictly inside it?";
    }
    case Category::ArithmeticNoFigure:
      if (sc.grouped) return fmt::format("Compute ({} {} {}) {} {}.", sc.a, sc.op1, sc.b, sc.op2, sc.c);
      return fmt::format("Compute {} {} {} {} {}.", sc.a, sc.op1, sc.b, sc.op2, sc.c);
  }
  return {};
}

std::optional<Scene> parse_question(std::string_view q) {
  Scene sc;
  Scanner s{q};
  if (starts_with(q, "Segments:")) {
    sc.category = Category::SegmentCrossings;
    s.s = q.substr(0, q.find(". How"));
    while (true) {
      const auto a = next_point(s);
      if (!a) break;
      const auto b = next_point(s);
      if (!b) return std::nullopt;
      sc.segments.emplace_back(*a, *b);
    }
    if (sc.segments.empty()) return std::nullopt;
    return sc;
  }
  if (starts_with(q, "Circle:")) {
    sc.category = Category::CircleLineHits;
    const auto c = next_point(s);
    const auto r = s.next_int();
    const auto p = next_point(s);
    const auto qq = next_point(s);
    if (!c || !r || !p || !qq || *r <= 0) return std::nullopt;
    sc.center = *c;
    sc.radius = *r;
    sc.p = *p;
    sc.q = *qq;
    return sc;
  }
  if (starts_with(q, "Polygon:")) {
    sc.category = Category::PolygonLatticePoints;
    s.s = q.substr(0, q.find(". How"));
    while (const auto v = next_point(s)) sc.polygon.push_back(*v);
    if (sc.polygon.size() < 3) return std::nullopt;
    return sc;
  }
  if (starts_with(q, "Compute ")) {
    sc.category = Category::ArithmeticNoFigure;
    std::string_view body = q.substr(8);
    sc.grouped = !body.empty() && body.front() == '(';
    std::vector<I> nums;
    std::vector<char> ops;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const char ch = body[i];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        I v = 0;
        while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) v = v * 10 + (body[i++] - '0');
        --i;
        nums.push_back(v);
      } else if (ch == '+' || ch == '-' || ch == '*') {
        ops.push_back(ch);
      }
    }
    if (nums.size() != 3 || ops.size() != 2) return std::nullopt;
    sc.a = nums[0];
    sc.b = nums[1];
    sc.c = nums[2];
    sc.op1 = ops[0];
    sc.op2 = ops[1];
    return sc;
  }
  return std::nullopt;
}

std::int64_t oracle_answer(const Scene& sc) {
  switch (sc.category) {
    case Category::SegmentCrossings: {
      I count = 0;
      for (std::size_t i = 0; i < sc.segments.size(); ++i)
        for (std::size_t j = i + 1; j < sc.segments.size(); ++j)
          count += segments_meet(sc.segments[i].first, sc.segments[i].second, sc.segments[j].first,
                                 sc.segments[j].second);
      return count;
    }
    case Category::CircleLineHits: {
      const I dx = ix(sc.q.x) - ix(sc.p.x), dy = ix(sc.q.y) - ix(sc.p.y);
      const I n = dx * (ix(sc.center.y) - ix(sc.p.y)) - dy * (ix(sc.center.x) - ix(sc.p.x));
      const I lhs = n * n, rhs = sc.radius * sc.radius * (dx * dx + dy * dy);
      return lhs < rhs ? 2 : (lhs == rhs ? 1 : 0);
    }
    case Category::PolygonLatticePoints: {
      I xmin = ix(sc.polygon[0].x), xmax = xmin, ymin = ix(sc.polygon[0].y), ymax = ymin;
      for (const auto& v : sc.polygon) {
        xmin = std::min(xmin, ix(v.x));
        xmax = std::max(xmax, ix(v.x));
        ymin = std::min(ymin, ix(v.y));
        ymax = std::max(ymax, ix(v.y));
      }
      I count = 0;
      for (I y = ymin; y <= ymax; ++y)
        for (I x = xmin; x <= xmax; ++x) count += strictly_inside(sc.polygon, x, y);
      return count;
    }
    case Category::ArithmeticNoFigure:
      if (sc.grouped) return apply(apply(sc.a, sc.op1, sc.b), sc.op2, sc.c);
      if (precedence(sc.op2) > precedence(sc.op1)) return apply(sc.a, sc.op1, apply(sc.b, sc.op2, sc.c));
      return apply(apply(sc.a, sc.op1, sc.b), sc.op2, sc.c);
  }
  return 0;
}

std::string build_construction(const Scene& sc) {
  std::string out;
  switch (sc.category) {
    case Category::SegmentCrossings: {
      std::string names;
      for (std::size_t i = 0; i < sc.segments.size(); ++i) {
        const auto name = fmt::format("S{}", i + 1);
        out += fmt::format("{} = segment({}, {})\n", name, spt(sc.segments[i].first), spt(sc.segments[i].second));
        names += (i ? ", " : "") + name;
      }
      out += "ans = crossings(" + names + ")";
      return out;
    }
    case Category::CircleLineHits:
      return fmt::format("C = circle({}, {})\nL = line({}, {})\nH = intersect(C, L)\nans = count(H)", spt(sc.center),
                         sc.radius, spt(sc.p), spt(sc.q));
    case Category::PolygonLatticePoints: {
      out = "P = polygon(";
      for (std::size_t i = 0; i < sc.polygon.size(); ++i) out += (i ? ", " : "") + spt(sc.polygon[i]);
      return out + ")\nans = lattice(P)";
    }
    case Category::ArithmeticNoFigure:
      return fmt::format("A = point({}, 0)\nB = point({}, 0)\nsegment(A, B)\nlabel(A, \"A\")\nlabel(B, \"B\")\n"
                         "span = distance(A, B)",
                         sc.a, sc.b);
  }
  return out;
}

std::vector<ProblemRecord> generate_synthetic(Category category, std::size_t n, std::uint64_t seed) {
  std::vector<ProblemRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(category), i));
    Scene sc;
    switch (category) {
      case Category::SegmentCrossings: sc = make_segments(rng); break;
      case Category::CircleLineHits: sc = make_circle_line(rng); break;
      case Category::PolygonLatticePoints: sc = make_polygon(rng); break;
      case Category::ArithmeticNoFigure: sc = make_arithmetic(rng); break;
    }
    ProblemRecord p;
    p.id = fmt::format("{}-{}-{:04}", to_string(category), seed, i);
    p.question = question_for(sc);
    p.gold_answer = std::to_string(oracle_answer(sc));
    p.suitability = category == Category::ArithmeticNoFigure ? 0 : 1;
    p.category = std::string(to_string(category));
    p.source = ProblemSource::Synthetic;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace figr::evalbench
