// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "figr/evalbench/dataset.hpp"
#include "figr/evalbench/evaluate.hpp"
#include "figr/evalbench/metrics.hpp"
#include "figr/evalbench/strategies.hpp"
#include "figr/evalbench/synthetic.hpp"
#include "figr/figscript/interpreter.hpp"
#include "figr/rollout/scripted.hpp"
#include "figr/util/error.hpp"
#include "figr/util/rng.hpp"

using namespace figr::evalbench;
using figr::Errc;
using figr::Error;
using figr::figscript::Vec2;

namespace {

using I = long long;

I ix(double v) { return static_cast<I>(v); }

I orient(Vec2 a, Vec2 b, Vec2 c) {
  return (ix(b.x) - ix(a.x)) * (ix(c.y) - ix(a.y)) - (ix(b.y) - ix(a.y)) * (ix(c.x) - ix(a.x));
}

int sgn(I v) { return (v > 0) - (v < 0); }

// Proper crossings only; callers exclude touching configurations.
I count_crossings(const Scene& sc) {
  I n = 0;
  for (std::size_t i = 0; i < sc.segments.size(); ++i)
    for (std::size_t j = i + 1; j < sc.segments.size(); ++j) {
      const auto [a, b] = sc.segments[i];
      const auto [c, d] = sc.segments[j];
      if (sgn(orient(a, b, c)) * sgn(orient(a, b, d)) < 0 && sgn(orient(c, d, a)) * sgn(orient(c, d, b)) < 0) ++n;
    }
  return n;
}

// Pick's theorem: 2A = 2I + B - 2.
I pick_interior(const std::vector<Vec2>& poly) {
  I twice_area = 0, boundary = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice_area += ix(p.x) * ix(q.y) - ix(q.x) * ix(p.y);
    boundary += std::gcd(std::llabs(ix(q.x) - ix(p.x)), std::llabs(ix(q.y) - ix(p.y)));
  }
  return (std::llabs(twice_area) - boundary + 2) / 2;
}

I circle_hits(const Scene& sc) {
  const I dx = ix(sc.q.x) - ix(sc.p.x), dy = ix(sc.q.y) - ix(sc.p.y);
  const I cr = dx * (ix(sc.center.y) - ix(sc.p.y)) - dy * (ix(sc.center.x) - ix(sc.p.x));
  const I lhs = cr * cr, rhs = sc.radius * sc.radius * (dx * dx + dy * dy);
  return lhs < rhs ? 2 : lhs == rhs ? 1 : 0;
}

I apply(I x, char op, I y) { return op == '+' ? x + y : op == '-' ? x - y : x * y; }

I arithmetic(const Scene& sc) {
  if (sc.grouped || sc.op1 == '*' || sc.op2 != '*') return apply(apply(sc.a, sc.op1, sc.b), sc.op2, sc.c);
  return apply(sc.a, sc.op1, sc.b * sc.c);
}

I reference_answer(const Scene& sc) {
  switch (sc.category) {
    case Category::SegmentCrossings: return count_crossings(sc);
    case Category::CircleLineHits: return circle_hits(sc);
    case Category::PolygonLatticePoints: return pick_interior(sc.polygon);
    case Category::ArithmeticNoFigure: return arithmetic(sc);
  }
  return -1;
}

constexpr Category kAll[] = {Category::SegmentCrossings, Category::CircleLineHits, Category::PolygonLatticePoints,
                             Category::ArithmeticNoFigure};

figr::rollout::Trajectory scripted(const std::vector<std::string>& script) {
  ProblemRecord p{"q", "Compute 2 + 1.", "3", 0, "arithmetic_no_figure", ProblemSource::Synthetic};
  return figr::rollout::run_episode(p, figr::rollout::ScriptedPolicy(script), {}, 0);
}

std::string block(std::size_t lines, bool ok = true) {
  std::string body;
  for (std::size_t i = 0; i < lines; ++i) body += "d" + std::to_string(i) + " = distance((0,0),(3,4))\n";
  if (!ok) body += "circle((0,0), -1)\n";
  return "```figscript\n" + body + "```";
}

struct Gone final : figr::rollout::PolicyHandle {
  struct S final : figr::rollout::PolicySession {
    figr::rollout::PolicyReply act(const figr::rollout::ContextView&) override {
      throw Error(Errc::PolicyUnavailable, "gone");
    }
  };
  std::unique_ptr<figr::rollout::PolicySession> open(const ProblemRecord&, std::uint64_t) const override {
    return std::make_unique<S>();
  }
};

}  // namespace

TEST_CASE("pass_at_1 examples") {
  std::vector<bool> v(64, false);
  std::fill(v.begin(), v.begin() + 48, true);
  CHECK(pass_at_1(v) == 0.75);
  CHECK(pass_at_1(std::vector<bool>{true}) == 1.0);
  CHECK(pass_at_1(std::vector<bool>(5, false)) == 0.0);
  CHECK_THROWS_AS(pass_at_1(std::vector<bool>{}), Error);
  try {
    pass_at_1(std::vector<bool>{});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyList);
  }
}

TEST_CASE("pass_at_1 is permutation invariant and equals count over k") {
  figr::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.uniform_int(0, 99);
    std::vector<bool> v(k);
    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i) count += v[i] = rng.uniform01() < 0.4;
    const double p = pass_at_1(v);
    CHECK(p == static_cast<double>(count) / static_cast<double>(k));
    std::reverse(v.begin(), v.end());
    CHECK(pass_at_1(v) == p);
  }
}

TEST_CASE("synthetic examples") {
  Scene x;
  x.category = Category::SegmentCrossings;
  x.segments = {{{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}};
  CHECK(oracle_answer(x) == 1);
  auto parsed = parse_question(question_for(x));
  REQUIRE(parsed);
  CHECK(parsed->segments.size() == 2);
  CHECK(oracle_answer(*parsed) == 1);

  Scene c;
  c.category = Category::CircleLineHits;
  c.center = {0, 0};
  c.radius = 1;
  c.p = {-2, 0};
  c.q = {2, 0};
  CHECK(oracle_answer(c) == 2);
  parsed = parse_question(question_for(c));
  REQUIRE(parsed);
  CHECK(oracle_answer(*parsed) == 2);

  Scene sq;
  sq.category = Category::PolygonLatticePoints;
  sq.polygon = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  CHECK(oracle_answer(sq) == 9);

  Scene ar;
  ar.category = Category::ArithmeticNoFigure;
  ar.a = 2, ar.b = 3, ar.c = 4, ar.op1 = '+', ar.op2 = '*';
  CHECK(oracle_answer(ar) == 14);
  ar.grouped = true;
  CHECK(oracle_answer(ar) == 20);
  CHECK(question_for(ar) == "Compute (2 + 3) * 4.");
}

TEST_CASE("gold answers agree with independent oracles on every generated instance") {
  for (auto cat : kAll) {
    const auto ds = generate_synthetic(cat, 300, 5);
    REQUIRE(ds.size() == 300);
    for (const auto& p : ds) {
      const auto sc = parse_question(p.question);
      REQUIRE(sc);
      CHECK(sc->category == cat);
      CHECK(p.gold_answer == std::to_string(reference_answer(*sc)));
    }
  }
}

TEST_CASE("random six-segment instances match the orientation count") {
  figr::Rng rng(99);
  int checked = 0;
  while (checked < 300) {
    Scene sc;
    sc.category = Category::SegmentCrossings;
    for (int i = 0; i < 6; ++i) {
      auto pt = [&] { return Vec2{static_cast<double>(rng.uniform_int(0, 12)), static_cast<double>(rng.uniform_int(0, 12))}; };
      sc.segments.push_back({pt(), pt()});
    }
    bool degenerate = false;
    for (std::size_t i = 0; i < 6 && !degenerate; ++i)
      for (std::size_t j = 0; j < 6 && !degenerate; ++j) {
        if (i == j) continue;
        const auto [a, b] = sc.segments[i];
        const auto [c, d] = sc.segments[j];
        degenerate = orient(a, b, c) == 0 || orient(a, b, d) == 0;
      }
    if (degenerate) continue;
    CHECK(oracle_answer(sc) == count_crossings(sc));
    ++checked;
  }
}

TEST_CASE("generator is deterministic and tags suitability") {
  for (auto cat : kAll) {
    const auto a = generate_synthetic(cat, 40, 3);
    const auto b = generate_synthetic(cat, 40, 3);
    const auto c = generate_synthetic(cat, 40, 4);
    std::set<std::string> ids, questions;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == b[i].id);
      CHECK(a[i].question == b[i].question);
      CHECK(a[i].gold_answer == b[i].gold_answer);
      CHECK(a[i].suitability == (cat == Category::ArithmeticNoFigure ? 0 : 1));
      CHECK(a[i].category == to_string(cat));
      CHECK_FALSE(a[i].gold_answer.empty());
      ids.insert(a[i].id);
      questions.insert(a[i].question);
    }
    CHECK(ids.size() == a.size());
    CHECK(questions.size() > a.size() / 2);
    CHECK(a[0].question != c[0].question);
  }
}

TEST_CASE("constructions execute and measure the gold answer") {
  for (auto cat : {Category::SegmentCrossings, Category::CircleLineHits, Category::PolygonLatticePoints}) {
    for (const auto& p : generate_synthetic(cat, 50, 8)) {
      const auto sc = parse_question(p.question);
      REQUIRE(sc);
      const auto out = figr::figscript::run_source(build_construction(*sc));
      REQUIRE(out.exec_ok);
      CHECK(read_feedback_value(out.text_feedback) == p.gold_answer);
    }
  }
  for (const auto& p : generate_synthetic(Category::ArithmeticNoFigure, 50, 8)) {
    const auto sc = parse_question(p.question);
    REQUIRE(sc);
    const auto out = figr::figscript::run_source(build_construction(*sc));
    REQUIRE(out.exec_ok);
    const auto read = read_feedback_value(out.text_feedback);
    REQUIRE(read);
    CHECK(*read != p.gold_answer);
  }
}

TEST_CASE("read_feedback_value") {
  CHECK(read_feedback_value("x = 3\nans = 7\ny = 9") == "7");
  CHECK(read_feedback_value("x = 3\ny = 9.5") == "9.5");
  CHECK(read_feedback_value("figure 64x64") == std::nullopt);
}

TEST_CASE("behavior_metrics examples") {
  std::vector<figr::rollout::Trajectory> ts;
  ts.push_back(scripted({block(3), "<answer>3</answer> <End>"}));
  ts.push_back(scripted({block(5, false), "<answer>3</answer> <End>"}));
  ts.push_back(scripted({block(2), block(1, false), "<answer>3</answer> <End>"}));
  ts.push_back(scripted({"Three. <answer>3</answer> <End>"}));
  const auto m = behavior_metrics(ts);
  CHECK(m.trajectories == 4);
  CHECK(m.code_count == 3);
  CHECK(m.code_ratio == 0.75);
  REQUIRE(m.code_pass_rate);
  CHECK(*m.code_pass_rate == 0.5);
  // Failing blocks carry one extra line.
  CHECK(m.mean_code_lines == doctest::Approx((3.0 + 6.0 + 2.0 + 2.0) / 4.0));

  std::vector<figr::rollout::Trajectory> two{scripted({block(3), "<answer>3</answer> <End>"}),
                                             scripted({block(5), "<answer>3</answer> <End>"})};
  CHECK(behavior_metrics(two).mean_code_lines == 4.0);

  std::vector<figr::rollout::Trajectory> none{scripted({"<answer>3</answer> <End>"})};
  CHECK_FALSE(behavior_metrics(none).code_pass_rate);
  CHECK(behavior_metrics(none).code_ratio == 0.0);
  CHECK_THROWS_AS(behavior_metrics(std::span<const figr::rollout::Trajectory>{}), Error);
}

TEST_CASE("behavior_metrics agrees with rollout counters") {
  std::vector<figr::rollout::Trajectory> ts;
  for (const auto& p : generate_synthetic(Category::PolygonLatticePoints, 10, 2))
    ts.push_back(figr::rollout::run_episode(p, ConstructThenAnswerPolicy(), {}, 1));
  std::size_t blocks = 0, lines = 0, passes = 0, code = 0, tokens = 0;
  for (const auto& t : ts) {
    CHECK(t.behavior == figr::rollout::count_behavior(t));
    blocks += t.behavior.code_blocks;
    lines += t.behavior.code_lines;
    passes += t.behavior.code_passes;
    code += t.behavior.code_blocks > 0;
    tokens += t.behavior.response_tokens;
  }
  const auto m = behavior_metrics(ts);
  CHECK(m.code_count == code);
  CHECK(m.mean_code_lines == static_cast<double>(lines) / static_cast<double>(blocks));
  CHECK(*m.code_pass_rate == static_cast<double>(passes) / static_cast<double>(blocks));
  CHECK(m.mean_response_tokens == static_cast<double>(tokens) / 10.0);
}

TEST_CASE("evaluate with reference policies") {
  std::vector<ProblemRecord> ds;
  for (auto cat : kAll) {
    auto part = generate_synthetic(cat, 5, 21);
    ds.insert(ds.end(), part.begin(), part.end());
  }
  EvalConfig cfg;
  cfg.k = 4;
  cfg.seed = 3;

  const auto oracle = evaluate(ds, figr::rollout::OraclePolicy(), cfg);
  CHECK(oracle.pass_at_1 == 1.0);
  CHECK(oracle.correctness.size() == ds.size());
  CHECK(oracle.correctness[0].size() == 4);
  CHECK(oracle.behavior.code_ratio == 0.0);
  for (const auto& [cat, v] : oracle.pass_at_1_by_category) CHECK(v == 1.0);

  const auto silent = evaluate(ds, figr::rollout::SilentPolicy(), cfg);
  CHECK(silent.pass_at_1 == 0.0);
  CHECK(silent.behavior.code_ratio == 0.0);
  CHECK_FALSE(silent.behavior.code_pass_rate);
  CHECK(report_to_json(silent)["behavior"]["code_pass_rate"].is_null());

  std::vector<ProblemRecord> geo(ds.begin(), ds.begin() + 15);
  const auto construct = evaluate(geo, ConstructThenAnswerPolicy(), cfg);
  CHECK(construct.pass_at_1 == 1.0);
  CHECK(construct.behavior.code_ratio == 1.0);
  CHECK(*construct.behavior.code_pass_rate == 1.0);
  for (double r : construct.per_problem_code_ratio) CHECK(r == 1.0);

  const auto csv = report_to_csv(construct);
  CHECK(csv.rfind("problem_id,s,pass_at_1,code_ratio\n", 0) == 0);
  CHECK(csv.find("\nALL,") != std::string::npos);
}

TEST_CASE("evaluate annotates episode failures as incorrect") {
  std::vector<ProblemRecord> ds = generate_synthetic(Category::ArithmeticNoFigure, 2, 1);
  EvalConfig cfg;
  cfg.k = 2;
  const auto r = evaluate(ds, Gone{}, cfg);
  CHECK(r.pass_at_1 == 0.0);
  for (const auto& row : r.errors)
    for (const auto& e : row) CHECK(e.find("PolicyUnavailable") != std::string::npos);
  CHECK_THROWS_AS(evaluate(ds, figr::rollout::OraclePolicy(), EvalConfig{0, {}, {}, 0, 1}), Error);
}

TEST_CASE("evaluate is deterministic across reruns and worker counts") {
  std::vector<ProblemRecord> ds;
  for (auto cat : kAll) {
    auto part = generate_synthetic(cat, 4, 2);
    ds.insert(ds.end(), part.begin(), part.end());
  }
  EvalConfig cfg;
  cfg.k = 3;
  cfg.seed = 77;
  std::vector<figr::rollout::Trajectory> t1, t2;
  const auto a = evaluate(ds, ConstructThenAnswerPolicy(), cfg, &t1);
  cfg.workers = 4;
  const auto b = evaluate(ds, ConstructThenAnswerPolicy(), cfg, &t2);
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
  REQUIRE(t1.size() == ds.size() * 3);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].seed == t2[i].seed);
    CHECK(t1[i].context_hash == t2[i].context_hash);
  }
  std::set<std::uint64_t> seeds;
  for (const auto& t : t1) seeds.insert(t.seed);
  CHECK(seeds.size() == t1.size());
}

TEST_CASE("dataset JSONL import") {
  std::istringstream in(
      "{\"id\":\"a\",\"question\":\"Compute 1 + 1.\",\"gold_answer\":\"2\",\"s\":0}\n"
      "\n"
      "{\"id\":\"b\",\"question\":\"Area?\",\"gold_answer\":\"4\"}\n");
  const auto ds = read_dataset_jsonl(in);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].suitability == 0);
  CHECK(ds[1].suitability == 1);
  CHECK(ds[1].source == ProblemSource::Imported);

  std::ostringstream out;
  write_dataset_jsonl(out, ds);
  std::istringstream back(out.str());
  const auto again = read_dataset_jsonl(back);
  REQUIRE(again.size() == 2);
  CHECK(again[0].id == "a");
  CHECK(again[1].gold_answer == "4");
  CHECK(again[1].suitability == 1);

  for (const char* bad : {"{\"id\":\"a\",\"question\":\"q\"}", "{\"id\":\"a\",\"question\":\"q\",\"gold_answer\":\"\"}",
                          "{\"id\":\"a\",\"question\":\"q\",\"gold_answer\":\"1\",\"s\":2}", "not json", "[1,2]"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(read_dataset_jsonl(b), Error);
  }
}
