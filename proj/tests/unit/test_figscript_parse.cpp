// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <string>

#include "figr/figscript/parser.hpp"
#include "figr/util/rng.hpp"

using namespace figr::figscript;

namespace {

Program ok(const ParseResult& r) {
  REQUIRE(std::holds_alternative<Program>(r));
  return std::get<Program>(r);
}

ExecError err(const ParseResult& r) {
  REQUIRE(std::holds_alternative<ExecError>(r));
  return std::get<ExecError>(r);
}

// Random source text from the valid grammar.
std::string random_program(figr::Rng& rng) {
  std::string src;
  int points = 0, segs = 0;
  const int n = static_cast<int>(rng.uniform_int(1, 12));
  auto num = [&] {
    const double v = rng.uniform(-20, 20);
    switch (rng.uniform_int(0, 3)) {
      case 0: return std::to_string(static_cast<int>(v));
      case 1: return std::to_string(v);
      case 2: return std::string("(") + std::to_string(static_cast<int>(v)) + " - 1.5) * 2";
      default: return std::string("-") + std::to_string(static_cast<int>(std::abs(v))) + "^2 / 3";
    }
  };
  for (int i = 0; i < n; ++i) {
    switch (rng.uniform_int(0, 5)) {
      case 0:
        src += "P" + std::to_string(points++) + " = point(" + num() + ", " + num() + ")\n";
        break;
      case 1:
        src += "S" + std::to_string(segs++) + " = segment((" + num() + ", " + num() + "), (" + num() + ", " + num() +
               "))\n";
        break;
      case 2: src += "circle(" + num() + ", " + num() + ", 2.5)\n"; break;
      case 3: src += "plot(sin(x) * x ^ 2 - -x, -3, 3)  # comment\n"; break;
      case 4: src += "assert(" + num() + " <= " + num() + " + 100)\n"; break;
      default: src += "label((" + num() + ", 1), \"A \\\"q\\\"\")\n\n"; break;
    }
  }
  return src;
}

}  // namespace

TEST_CASE("parse: three statement program keeps order") {
  const auto p = ok(parse("A = point(0,0)\nB = point(2,2)\nsegment(A,B)"));
  REQUIRE(p.statements.size() == 3);
  CHECK(p.statements[0].kind == StatementKind::DefinePoint);
  CHECK(p.statements[0].binder == "A");
  CHECK(p.statements[1].binder == "B");
  CHECK(p.statements[2].kind == StatementKind::DefineSegment);
  CHECK_FALSE(p.statements[2].binder);
}

TEST_CASE("parse: empty program is valid") {
  CHECK(ok(parse("")).statements.empty());
  CHECK(ok(parse("\n  # only a comment\n\n")).statements.empty());
}

TEST_CASE("parse: unknown keyword") {
  const auto e = err(parse("circl(0,0,1)"));
  CHECK(e.kind == ExecErrorKind::ParseError);
  CHECK(e.statement == 0);
  CHECK(e.column == 1);
  CHECK(e.message.find("\"circl\"") != std::string::npos);
}

TEST_CASE("parse: error positions point into the source") {
  const std::string src = "A = point(0,0)\n\nB = point(1, 2.3.4)\n";
  const auto e = err(parse(src));
  CHECK(e.statement == 1);
  CHECK(e.column == 14);
  CHECK(src.substr(e.offset, 3) == "2.3");
  CHECK(e.message.find("malformed number") != std::string::npos);
}

TEST_CASE("parse: arity and placement errors") {
  CHECK(err(parse("segment(A)")).message.find("expects 2 arguments, got 1") != std::string::npos);
  CHECK(err(parse("circle(1)")).message.find("expects 2 or 3") != std::string::npos);
  CHECK(err(parse("polygon((0,0),(1,1))")).message.find("at least 3") != std::string::npos);
  CHECK(err(parse("x = point(1,1)")).message.find("reserved") != std::string::npos);
  CHECK(err(parse("A = point(1,1)\nA = point(2,2)")).message.find("already bound") != std::string::npos);
  CHECK(err(parse("d = 1 < 2")).message.find("only allowed inside assert") != std::string::npos);
  CHECK(err(parse("s = segment(label((0,0), \"a\"), (1,1))")).message.find("must be a statement") !=
        std::string::npos);
  CHECK(err(parse("plot(distance((0,0),(1,1)), 0, 1)")).message.find("plot body") != std::string::npos);
  CHECK(err(parse("label((0,0), 3)")).message.find("string literal") != std::string::npos);
  CHECK(err(parse("L = label((0,0), \"a\")")).message.find("does not produce a value") != std::string::npos);
  CHECK(err(parse("1e")).kind == ExecErrorKind::ParseError);
  CHECK(err(parse("point(1,1")).kind == ExecErrorKind::ParseError);
  CHECK(err(parse("label((0,0), \"open)")).message.find("unterminated") != std::string::npos);
}

TEST_CASE("parse: statement and nesting limits") {
  std::string src;
  for (int i = 0; i < 257; ++i) src += "point(" + std::to_string(i) + ", 0)\n";
  const auto e = err(parse(src));
  CHECK(e.kind == ExecErrorKind::LimitExceeded);
  CHECK(e.statement == 256);

  std::string deep = "v = " + std::string(500, '(') + "1" + std::string(500, ')');
  CHECK(err(parse(deep)).message.find("nested too deeply") != std::string::npos);
}

TEST_CASE("parse: statement kinds") {
  const auto p = ok(parse(
      "P = (1, 2)\nl = line(P, (3,4))\nc = circle(P, 2)\nq = polygon((0,0),(1,0),(0,1))\n"
      "f = plot(x^2, -1, 1)\nI = intersect(l, c)\nd = distance(P, (0,0))\nlabel(P, \"P\")\n"
      "assert(d > 0)\nwindow(-5, 5, -5, 5)\nr = 2 * 3\n"));
  const StatementKind expected[] = {StatementKind::DefinePoint, StatementKind::DefineLine,
                                    StatementKind::DefineCircle, StatementKind::DefinePolygon,
                                    StatementKind::DefineFunctionPlot, StatementKind::Intersect,
                                    StatementKind::Measure, StatementKind::Label,
                                    StatementKind::Assert, StatementKind::Window,
                                    StatementKind::Measure};
  REQUIRE(p.statements.size() == std::size(expected));
  for (std::size_t i = 0; i < p.statements.size(); ++i) CHECK(p.statements[i].kind == expected[i]);
}

TEST_CASE("property: pretty-print then re-parse is the identity on statements") {
  figr::Rng rng(20240611);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string src = random_program(rng);
    const auto first = parse(src);
    REQUIRE_MESSAGE(std::holds_alternative<Program>(first), src);
    const auto& p = std::get<Program>(first);
    const std::string printed = pretty_print(p);
    const auto second = parse(printed);
    REQUIRE_MESSAGE(std::holds_alternative<Program>(second), printed);
    CHECK_MESSAGE(same_statements(p, std::get<Program>(second)), printed);
    CHECK(pretty_print(std::get<Program>(second)) == printed);
  }
}

TEST_CASE("property: parse is total on arbitrary bytes") {
  figr::Rng rng(7);
  const std::string alphabet = "point(segment,circle)=+-*/^<>!\"#.0123456789eE _xyzAB\n\t\\";
  for (int trial = 0; trial < 3000; ++trial) {
    std::string src;
    const auto len = rng.uniform_int(0, 80);
    for (int i = 0; i < len; ++i) {
      if (rng.bernoulli(0.1))
        src.push_back(static_cast<char>(rng.uniform_int(0, 255)));
      else
        src.push_back(alphabet[static_cast<std::size_t>(rng.uniform_int(0, alphabet.size() - 1))]);
    }
    ParseResult r;
    CHECK_NOTHROW(r = parse(src));
    if (const auto* e = std::get_if<ExecError>(&r)) CHECK(e->offset <= src.size());
  }
}
