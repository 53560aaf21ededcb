// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>

#include "figr/figscript/interpreter.hpp"
#include "figr/figscript/parser.hpp"
#include "figr/util/rng.hpp"

using namespace figr::figscript;

namespace {

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("execute: crossing diagonals meet at (1, 1)") {
  const auto out = run_source("P = intersect(segment((0,0),(2,2)), segment((0,2),(2,0)))");
  REQUIRE(out.exec_ok);
  CHECK(contains(out.text_feedback, "P = (1, 1)"));
  CHECK(out.raster.has_value());
}

TEST_CASE("execute: unit circle meets the x-axis twice") {
  const auto out = run_source("c = circle((0,0), 1)\nl = line((-2,0),(2,0))\nQ = intersect(c, l)");
  REQUIRE(out.exec_ok);
  CHECK(contains(out.text_feedback, "(-1, 0)"));
  CHECK(contains(out.text_feedback, "(1, 0)"));
}

TEST_CASE("execute: negative radius is a domain error") {
  const auto out = run_source("circle(0,0,-1)");
  CHECK_FALSE(out.exec_ok);
  REQUIRE(out.error);
  CHECK(out.error->kind == ExecErrorKind::DomainError);
  CHECK(out.error->statement == 0);
  CHECK(out.error->message == "radius must be positive");
  CHECK_FALSE(out.raster);
}

TEST_CASE("execute: error kinds and invariants") {
  SUBCASE("unbound identifier") {
    const auto out = run_source("segment(A, (1,1))");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::UnboundIdentifier);
  }
  SUBCASE("parallel lines") {
    const auto out = run_source("I = intersect(line((0,0),(1,0)), line((0,1),(1,1)))");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::DomainError);
  }
  SUBCASE("concentric circles") {
    const auto out = run_source("I = intersect(circle((0,0),1), circle((0,0),2))");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::DomainError);
  }
  SUBCASE("empty program") {
    const auto out = run_source("");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::EmptyScene);
  }
  SUBCASE("parse failure") {
    const auto out = run_source("circl(0,0,1)");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::ParseError);
    CHECK(out.stats.statements_run == 0);
  }
  SUBCASE("failed assert") {
    const auto out = run_source("d = distance((0,0),(3,4))\nassert(d < 5)");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::DomainError);
    CHECK(out.error->statement == 1);
    CHECK(contains(out.text_feedback, "d = 5"));
    CHECK(out.stats.statements_run == 1);
  }
  SUBCASE("sqrt of negative") {
    const auto out = run_source("v = sqrt(0 - 4)");
    REQUIRE(out.error);
    CHECK(out.error->kind == ExecErrorKind::DomainError);
  }
}

TEST_CASE("execute: measures report values") {
  const auto out = run_source(
      "A = (0,0)\nB = (4,0)\nC = (0,3)\nd = distance(B, C)\nt = polygon(A, B, C)\na = area(t)\n"
      "g = angle(B, A, C)\nn = crossings(segment(A,(2,2)), segment((0,2),(2,0)), segment((5,5),(6,6)))\n"
      "k = lattice(polygon((0,0),(4,0),(4,4),(0,4)))\nm = count(intersect(circle((0,0),5), line((0,-10),(0,10))))\n"
      "distance(A, B) + 1");
  REQUIRE_MESSAGE(out.exec_ok, out.feedback_for_context());
  CHECK(contains(out.text_feedback, "d = 5\n"));
  CHECK(contains(out.text_feedback, "a = 6\n"));
  CHECK(contains(out.text_feedback, "g = 90\n"));
  CHECK(contains(out.text_feedback, "n = 1\n"));
  CHECK(contains(out.text_feedback, "k = 9\n"));
  CHECK(contains(out.text_feedback, "m = 2\n"));
  CHECK(contains(out.text_feedback, "_10 = 5\n"));
}

TEST_CASE("execute: tangency reports one point") {
  const auto out = run_source("T = intersect(circle((0,0),1), line((-3,1),(3,1)))");
  REQUIRE(out.exec_ok);
  CHECK(contains(out.text_feedback, "T = (0, 1)\n"));
}

TEST_CASE("execute: exec_ok iff error absent; raster iff drawable") {
  const char* programs[] = {"d = distance((0,0),(1,1))", "point(1,2)", "circle(0,0,0)", "plot(1/x, -1, 1)",
                            "label((0,0), \"A\")", "window(0,1,0,1)\npoint(0.5,0.5)", "bogus(1)"};
  for (const char* src : programs) {
    const auto out = run_source(src);
    CHECK_MESSAGE(out.exec_ok == !out.error.has_value(), src);
    if (out.exec_ok) {
      const auto parsed = parse(src);
      bool drawable = false;
      for (const auto& s : std::get<Program>(parsed).statements) drawable |= is_drawable(s.kind);
      CHECK_MESSAGE(out.raster.has_value() == drawable, src);
    }
  }
}

TEST_CASE("execute: explicit window is used for rendering") {
  const auto out = run_source("window(0, 10, 0, 5)\npoint(1, 1)");
  REQUIRE(out.raster);
  CHECK(out.raster->world_window == WorldWindow{0, 10, 0, 5});
  const auto bad = run_source("window(1, 1, 0, 5)\npoint(1, 1)");
  REQUIRE(bad.error);
  CHECK(bad.error->kind == ExecErrorKind::DomainError);
}

TEST_CASE("sandbox: instruction cap is enforced") {
  ExecLimits small;
  small.instruction_cap = 50;
  const auto out = execute(std::get<Program>(parse("plot(sin(x) + cos(x), -1, 1)")), small);
  REQUIRE(out.error);
  CHECK(out.error->kind == ExecErrorKind::LimitExceeded);
  CHECK(out.stats.instructions <= small.instruction_cap);

  std::string chain = "a0 = 1\n";
  for (int i = 1; i < 200; ++i)
    chain += "a" + std::to_string(i) + " = a" + std::to_string(i - 1) + " * 1 + a" + std::to_string(i - 1) +
             " - a" + std::to_string(i - 1) + "\n";
  ExecLimits tiny;
  tiny.instruction_cap = 300;
  const auto chained = execute(std::get<Program>(parse(chain)), tiny);
  REQUIRE(chained.error);
  CHECK(chained.error->kind == ExecErrorKind::LimitExceeded);
  CHECK(chained.stats.instructions <= tiny.instruction_cap);

  const auto huge = run_source("k = lattice(polygon((0,0),(100000,0),(0,100000)))");
  REQUIRE(huge.error);
  CHECK(huge.error->kind == ExecErrorKind::LimitExceeded);
}

TEST_CASE("property: random programs terminate within the cap and are deterministic") {
  figr::Rng rng(99);
  const char* pieces[] = {"point(%a, %b)", "segment((%a,%b),(%b,%a))", "circle((%a,%b), 3)",
                          "plot(x*x - %a, -4, 4)", "v%i = distance((%a,%b),(0,0))", "label((%a,%b), \"Q\")",
                          "I%i = intersect(line((%a,0),(0,%b)), circle((0,0),4))"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string src;
    const auto n = rng.uniform_int(1, 8);
    for (int i = 0; i < n; ++i) {
      std::string piece = pieces[rng.uniform_int(0, std::size(pieces) - 1)];
      for (std::size_t pos; (pos = piece.find("%a")) != std::string::npos;)
        piece.replace(pos, 2, std::to_string(rng.uniform_int(-9, 9)));
      for (std::size_t pos; (pos = piece.find("%b")) != std::string::npos;)
        piece.replace(pos, 2, std::to_string(rng.uniform_int(1, 9)));
      for (std::size_t pos; (pos = piece.find("%i")) != std::string::npos;) piece.replace(pos, 2, std::to_string(i));
      src += piece + "\n";
    }
    ExecLimits limits;
    limits.instruction_cap = static_cast<std::uint64_t>(rng.uniform_int(1, 5000));
    const auto p = std::get<Program>(parse(src));
    const auto a = execute(p, limits);
    const auto b = execute(p, limits);
    CHECK(a == b);
    CHECK(a.stats.instructions <= limits.instruction_cap);
    if (!a.exec_ok && a.error->kind != ExecErrorKind::LimitExceeded)
      CHECK_MESSAGE(a.error->kind == ExecErrorKind::DomainError, src);
  }
}

TEST_CASE("property: constructed crossings are recovered within 1e-9") {
  figr::Rng rng(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 x{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const double t1 = rng.uniform(0, 6.283185307179586), t2 = t1 + rng.uniform(0.2, 2.9);
    const Vec2 d1{std::cos(t1), std::sin(t1)}, d2{std::cos(t2), std::sin(t2)};
    const Segment2 s{x - rng.uniform(0.5, 20) * d1, x + rng.uniform(0.5, 20) * d1};
    const Segment2 t{x - rng.uniform(0.5, 20) * d2, x + rng.uniform(0.5, 20) * d2};
    const auto r = intersect(s, t);
    REQUIRE(r.points.size() == 1);
    CHECK(norm(r.points[0] - x) <= 1e-9);
  }
}
