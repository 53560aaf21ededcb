// SPDX-License-Identifier: Apache-2.0
#include "figr/figscript/interpreter.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <variant>

#include "figr/figscript/parser.hpp"
#include "figr/util/text.hpp"

namespace figr::figscript {
namespace {

struct PointSet {
  std::vector<Vec2> points;
};
struct PlotValue {
  std::vector<Vec2> samples;
};
struct PolygonValue {
  Polygon2 vertices;
};
struct StringValue {
  std::string text;
};

using Value = std::variant<double, Vec2, PointSet, Line2, Segment2, Circle2, PolygonValue, PlotValue, StringValue>;

std::string_view type_name(const Value& v) {
  static constexpr std::string_view kNames[] = {"number", "point", "point set", "line", "segment",
                                                "circle", "polygon", "plot", "string"};
  return kNames[v.index()];
}

std::string format_point(Vec2 p) { return "(" + format_number(p.x) + ", " + format_number(p.y) + ")"; }

std::string format_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* p = std::get_if<Vec2>(&v)) return format_point(*p);
  if (const auto* s = std::get_if<PointSet>(&v)) {
    if (s->points.size() == 1) return format_point(s->points[0]);
    std::string out = "{";
    for (std::size_t i = 0; i < s->points.size(); ++i) {
      if (i) out += ", ";
      out += format_point(s->points[i]);
    }
    return out + "}";
  }
  if (const auto* s = std::get_if<Segment2>(&v)) return "segment " + format_point(s->a) + " " + format_point(s->b);
  if (const auto* l = std::get_if<Line2>(&v)) return "line " + format_point(l->a) + " " + format_point(l->b);
  if (const auto* c = std::get_if<Circle2>(&v))
    return "circle " + format_point(c->center) + " r=" + format_number(c->radius);
  if (const auto* p = std::get_if<PolygonValue>(&v)) return "polygon with " + std::to_string(p->vertices.size()) + " vertices";
  if (std::holds_alternative<PlotValue>(v)) return "plot";
  return std::get<StringValue>(v).text;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args) n += node_count(a);
  return n;
}

struct Abort {
  ExecError error;
};

class Evaluator {
 public:
  Evaluator(const Program& program, const ExecLimits& limits) : program_(program), limits_(limits) {}

  Evaluation run() {
    Evaluation out;
    const auto& stmts = program_.statements;
    if (stmts.size() > limits_.max_statements) {
      out.error = ExecError{ExecErrorKind::LimitExceeded, limits_.max_statements, 1,
                            stmts[limits_.max_statements].offset,
                            "more than " + std::to_string(limits_.max_statements) + " statements"};
      return out;
    }
    for (const auto& st : stmts) {
      out.has_drawable |= is_drawable(st.kind);
      out.has_measurable |= is_measurable(st.kind);
    }
    if (!out.has_drawable && !out.has_measurable) {
      out.error = ExecError{ExecErrorKind::EmptyScene, 0, 0, 0,
                            stmts.empty() ? "program is empty" : "program has nothing to draw or measure"};
      return out;
    }
    for (index_ = 0; index_ < stmts.size(); ++index_) {
      try {
        exec_statement(stmts[index_], out);
        ++out.stats.statements_run;
      } catch (const Abort& a) {
        out.error = a.error;
        break;
      }
    }
    out.scene = std::move(scene_);
    out.explicit_window = window_;
    out.text_feedback = std::move(text_);
    out.stats.instructions = instructions_;
    return out;
  }

 private:
  [[noreturn]] void fail(ExecErrorKind kind, std::size_t column, std::string message) const {
    const auto& st = program_.statements[index_];
    throw Abort{ExecError{kind, index_, column, st.offset, std::move(message)}};
  }

  [[noreturn]] void domain(const Expr& at, std::string message) const {
    fail(ExecErrorKind::DomainError, at.column, std::move(message));
  }

  void charge(double n, const Expr& at) {
    const double total = static_cast<double>(instructions_) + n;
    if (!(total <= static_cast<double>(limits_.instruction_cap)))
      fail(ExecErrorKind::LimitExceeded, at.column,
           "instruction cap of " + std::to_string(limits_.instruction_cap) + " exceeded");
    instructions_ = static_cast<std::uint64_t>(total);
  }

  double scalar(const Value& v, const Expr& at) const {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    domain(at, "expected a number, got " + std::string(type_name(v)));
  }

  Vec2 point(const Value& v, const Expr& at) const {
    if (const auto* p = std::get_if<Vec2>(&v)) return *p;
    if (const auto* s = std::get_if<PointSet>(&v)) {
      if (s->points.size() == 1) return s->points[0];
      domain(at, "point set with " + std::to_string(s->points.size()) + " points used as a point");
    }
    domain(at, "expected a point, got " + std::string(type_name(v)));
  }

  double finite(double v, const Expr& at) const {
    if (!std::isfinite(v) && !plot_mode_) domain(at, "non-finite result");
    return v;
  }

  Value eval(const Expr& e) {
    if (!plot_mode_) charge(1, e);
    switch (e.kind) {
      case ExprKind::Number: return e.number;
      case ExprKind::String: return StringValue{e.text};
      case ExprKind::Identifier: {
        if (e.text == "pi") return std::numbers::pi;
        if (e.text == "x" && plot_mode_) return plot_x_;
        const auto it = env_.find(e.text);
        if (it == env_.end()) fail(ExecErrorKind::UnboundIdentifier, e.column, "unbound identifier '" + e.text + "'");
        return it->second;
      }
      case ExprKind::Tuple:
        return Vec2{scalar(eval(e.args[0]), e.args[0]), scalar(eval(e.args[1]), e.args[1])};
      case ExprKind::Unary: {
        const double v = scalar(eval(e.args[0]), e.args[0]);
        return e.text == "-" ? -v : v;
      }
      case ExprKind::Binary: {
        const double a = scalar(eval(e.args[0]), e.args[0]);
        const double b = scalar(eval(e.args[1]), e.args[1]);
        double r = 0.0;
        if (e.text == "+") r = a + b;
        else if (e.text == "-") r = a - b;
        else if (e.text == "*") r = a * b;
        else if (e.text == "/") {
          if (b == 0.0 && !plot_mode_) domain(e, "division by zero");
          r = a / b;
        } else r = std::pow(a, b);
        return finite(r, e);
      }
      case ExprKind::Compare: {
        const double a = scalar(eval(e.args[0]), e.args[0]);
        const double b = scalar(eval(e.args[1]), e.args[1]);
        const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
        bool r = false;
        if (e.text == "<") r = a < b;
        else if (e.text == "<=") r = a <= b + tol;
        else if (e.text == ">") r = a > b;
        else if (e.text == ">=") r = a + tol >= b;
        else if (e.text == "==") r = std::abs(a - b) <= tol;
        else r = std::abs(a - b) > tol;
        return r ? 1.0 : 0.0;
      }
      case ExprKind::Call: return call(e);
    }
    return 0.0;
  }

  std::vector<Value> eval_args(const Expr& e) {
    std::vector<Value> out;
    out.reserve(e.args.size());
    for (const auto& a : e.args) out.push_back(eval(a));
    return out;
  }

  Value call(const Expr& e) {
    const std::string& f = e.text;
    if (f == "plot") return make_plot(e);
    const auto args = eval_args(e);
    const auto& ax = e.args;
    if (f == "point") {
      if (args.size() == 1) return point(args[0], ax[0]);
      return Vec2{scalar(args[0], ax[0]), scalar(args[1], ax[1])};
    }
    if (f == "line" || f == "segment") {
      const Vec2 a = point(args[0], ax[0]);
      const Vec2 b = point(args[1], ax[1]);
      if (a == b) domain(e, f + " needs two distinct points");
      if (f == "line") return Line2{a, b};
      return Segment2{a, b};
    }
    if (f == "circle") {
      Vec2 c;
      double r;
      if (args.size() == 2) {
        c = point(args[0], ax[0]);
        r = scalar(args[1], ax[1]);
      } else {
        c = {scalar(args[0], ax[0]), scalar(args[1], ax[1])};
        r = scalar(args[2], ax[2]);
      }
      if (!(r > 0)) domain(e, "radius must be positive");
      return Circle2{c, r};
    }
    if (f == "polygon") {
      PolygonValue p;
      for (std::size_t i = 0; i < args.size(); ++i) p.vertices.push_back(point(args[i], ax[i]));
      return p;
    }
    if (f == "intersect") return intersect_values(e, args[0], args[1]);
    if (f == "distance") {
      if (const auto* l = std::get_if<Line2>(&args[1])) return point_line_distance(point(args[0], ax[0]), *l);
      if (const auto* l = std::get_if<Line2>(&args[0])) return point_line_distance(point(args[1], ax[1]), *l);
      return norm(point(args[0], ax[0]) - point(args[1], ax[1]));
    }
    if (f == "length") {
      if (const auto* s = std::get_if<Segment2>(&args[0])) return norm(s->b - s->a);
      if (const auto* c = std::get_if<Circle2>(&args[0])) return 2 * std::numbers::pi * c->radius;
      if (const auto* p = std::get_if<PolygonValue>(&args[0])) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p->vertices.size(); ++i)
          sum += norm(p->vertices[(i + 1) % p->vertices.size()] - p->vertices[i]);
        return sum;
      }
      domain(ax[0], "length expects a segment, circle or polygon, got " + std::string(type_name(args[0])));
    }
    if (f == "area") {
      if (const auto* c = std::get_if<Circle2>(&args[0])) return std::numbers::pi * c->radius * c->radius;
      if (const auto* p = std::get_if<PolygonValue>(&args[0])) return polygon_area(p->vertices);
      domain(ax[0], "area expects a circle or polygon, got " + std::string(type_name(args[0])));
    }
    if (f == "angle") return angle_degrees(point(args[0], ax[0]), point(args[1], ax[1]), point(args[2], ax[2]));
    if (f == "count") {
      if (const auto* s = std::get_if<PointSet>(&args[0])) return static_cast<double>(s->points.size());
      domain(ax[0], "count expects a point set, got " + std::string(type_name(args[0])));
    }
    if (f == "crossings") {
      std::vector<Segment2> segs;
      for (std::size_t i = 0; i < args.size(); ++i) {
        const auto* s = std::get_if<Segment2>(&args[i]);
        if (!s) domain(ax[i], "crossings expects segments, got " + std::string(type_name(args[i])));
        segs.push_back(*s);
      }
      const double n = static_cast<double>(segs.size());
      charge(n * (n - 1) / 2, e);
      return static_cast<double>(count_crossings(segs));
    }
    if (f == "lattice") {
      const auto* p = std::get_if<PolygonValue>(&args[0]);
      if (!p) domain(ax[0], "lattice expects a polygon, got " + std::string(type_name(args[0])));
      charge(lattice_scan_cost(p->vertices), e);
      return static_cast<double>(count_interior_lattice_points(p->vertices));
    }
    if (f == "roots") {
      const auto* p = std::get_if<PlotValue>(&args[0]);
      if (!p) domain(ax[0], "roots expects a plot, got " + std::string(type_name(args[0])));
      return static_cast<double>(count_roots(*p));
    }
    // Math functions.
    const double a = scalar(args[0], ax[0]);
    double r = 0.0;
    if (f == "sin") r = std::sin(a);
    else if (f == "cos") r = std::cos(a);
    else if (f == "tan") r = std::tan(a);
    else if (f == "sqrt") r = std::sqrt(a);
    else if (f == "abs") r = std::abs(a);
    else if (f == "exp") r = std::exp(a);
    else if (f == "log") r = std::log(a);
    else if (f == "min") r = std::min(a, scalar(args[1], ax[1]));
    else if (f == "max") r = std::max(a, scalar(args[1], ax[1]));
    return finite(r, e);
  }

  static std::size_t count_roots(const PlotValue& p) {
    std::size_t roots = 0;
    const Vec2* prev = nullptr;
    for (const auto& s : p.samples) {
      if (!std::isfinite(s.y)) {
        prev = nullptr;
        continue;
      }
      if (s.y == 0.0) {
        ++roots;
      } else if (prev && prev->y != 0.0 && (prev->y < 0) != (s.y < 0)) {
        ++roots;
      }
      prev = &s;
    }
    return roots;
  }

  Value make_plot(const Expr& e) {
    const double a = scalar(eval(e.args[1]), e.args[1]);
    const double b = scalar(eval(e.args[2]), e.args[2]);
    if (!(a < b)) domain(e, "plot range must satisfy xmin < xmax");
    const std::size_t n = limits_.plot_samples;
    // Body evaluations are charged up front, one instruction per node per sample.
    charge(static_cast<double>(n) * static_cast<double>(node_count(e.args[0])), e);
    PlotValue out;
    out.samples.reserve(n);
    plot_mode_ = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      plot_x_ = a + (b - a) * t;
      const double y = scalar(eval(e.args[0]), e.args[0]);
      out.samples.push_back({plot_x_, std::isfinite(y) ? y : std::numeric_limits<double>::quiet_NaN()});
    }
    plot_mode_ = false;
    return out;
  }

  Value intersect_values(const Expr& e, const Value& a, const Value& b) {
    std::optional<IntersectResult> r;
    auto as_line = [](const Value& v) { return std::get_if<Line2>(&v); };
    auto as_seg = [](const Value& v) { return std::get_if<Segment2>(&v); };
    auto as_circle = [](const Value& v) { return std::get_if<Circle2>(&v); };
    if (as_line(a) && as_line(b)) r = intersect(*as_line(a), *as_line(b));
    else if (as_seg(a) && as_seg(b)) r = intersect(*as_seg(a), *as_seg(b));
    else if (as_line(a) && as_seg(b)) r = intersect(*as_line(a), *as_seg(b));
    else if (as_seg(a) && as_line(b)) r = intersect(*as_line(b), *as_seg(a));
    else if (as_circle(a) && as_line(b)) r = intersect(*as_circle(a), *as_line(b));
    else if (as_line(a) && as_circle(b)) r = intersect(*as_circle(b), *as_line(a));
    else if (as_circle(a) && as_seg(b)) r = intersect(*as_circle(a), *as_seg(b));
    else if (as_seg(a) && as_circle(b)) r = intersect(*as_circle(b), *as_seg(a));
    else if (as_circle(a) && as_circle(b)) r = intersect(*as_circle(a), *as_circle(b));
    else
      domain(e, "cannot intersect " + std::string(type_name(a)) + " with " + std::string(type_name(b)));
    if (r->domain_error) domain(e, *r->domain_error);
    return PointSet{std::move(r->points)};
  }

  void exec_statement(const Statement& st, Evaluation&) {
    charge(1, st.expr);
    const auto& args = st.expr.args;
    if (st.kind == StatementKind::Label) {
      charge(1, st.expr);
      scene_.items.push_back(LabelPrim{point(eval(args[0]), args[0]), args[1].text});
      return;
    }
    if (st.kind == StatementKind::Window) {
      charge(1, st.expr);
      double w[4];
      for (int i = 0; i < 4; ++i) w[i] = scalar(eval(args[i]), args[i]);
      if (!(w[0] < w[1]) || !(w[2] < w[3])) domain(st.expr, "window needs xmin < xmax and ymin < ymax");
      window_ = WorldWindow{w[0], w[1], w[2], w[3]};
      return;
    }
    if (st.kind == StatementKind::Assert) {
      charge(1, st.expr);
      if (scalar(eval(args[0]), args[0]) == 0.0) domain(st.expr, "assertion failed: " + pretty_print(args[0]));
      return;
    }
    Value v = eval(st.expr);
    const std::string name = st.binder ? *st.binder : "_" + std::to_string(index_);
    switch (st.kind) {
      case StatementKind::DefinePoint: scene_.items.push_back(PointMark{point(v, st.expr)}); break;
      case StatementKind::DefineLine: {
        const auto& l = std::get<Line2>(v);
        scene_.items.push_back(LinePrim{l.a, l.b});
        break;
      }
      case StatementKind::DefineSegment: {
        const auto& s = std::get<Segment2>(v);
        scene_.items.push_back(SegmentPrim{s.a, s.b});
        break;
      }
      case StatementKind::DefineCircle: {
        const auto& c = std::get<Circle2>(v);
        scene_.items.push_back(CirclePrim{c.center, c.radius});
        break;
      }
      case StatementKind::DefinePolygon:
        scene_.items.push_back(PolylinePrim{std::get<PolygonValue>(v).vertices, true});
        break;
      case StatementKind::DefineFunctionPlot:
        scene_.items.push_back(PolylinePrim{std::get<PlotValue>(v).samples, false});
        break;
      case StatementKind::Intersect:
        for (auto p : std::get<PointSet>(v).points) scene_.items.push_back(PointMark{p});
        text_ += name + " = " + format_value(v) + "\n";
        break;
      case StatementKind::Measure: text_ += name + " = " + format_value(v) + "\n"; break;
      case StatementKind::Label:
      case StatementKind::Assert:
      case StatementKind::Window:
        break;
    }
    if (st.binder) env_.emplace(*st.binder, std::move(v));
  }

  const Program& program_;
  const ExecLimits& limits_;
  std::size_t index_ = 0;
  std::uint64_t instructions_ = 0;
  bool plot_mode_ = false;
  double plot_x_ = 0.0;
  std::map<std::string, Value, std::less<>> env_;
  Scene scene_;
  std::optional<WorldWindow> window_;
  std::string text_;
};

}  // namespace

Evaluation evaluate(const Program& program, const ExecLimits& limits) { return Evaluator(program, limits).run(); }

ExecOutcome execute(const Program& program, const ExecLimits& limits) {
  Evaluation ev = evaluate(program, limits);
  ExecOutcome out;
  out.text_feedback = std::move(ev.text_feedback);
  out.stats = ev.stats;
  out.error = std::move(ev.error);
  out.exec_ok = !out.error;
  if (out.exec_ok && ev.has_drawable) {
    const WorldWindow window = ev.explicit_window ? *ev.explicit_window : auto_window(ev.scene);
    out.raster = rasterize(ev.scene, window, limits.width, limits.height);
  }
  return out;
}

ExecOutcome run_source(std::string_view source, const ExecLimits& limits) {
  ParseLimits pl;
  pl.max_statements = limits.max_statements;
  auto parsed = parse(source, pl);
  if (auto* err = std::get_if<ExecError>(&parsed)) {
    ExecOutcome out;
    out.error = *err;
    return out;
  }
  return execute(std::get<Program>(parsed), limits);
}

std::string ExecOutcome::feedback_for_context() const {
  std::string out = text_feedback;
  if (error) out += "error: " + error->describe() + "\n";
  if (out.empty()) out = "ok\n";
  return out;
}

}  // namespace figr::figscript
