// SPDX-License-Identifier: Apache-2.0
#include "figr/grpo/toy_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "figr/evalbench/strategies.hpp"
#include "figr/evalbench/synthetic.hpp"
#include "figr/util/hash.hpp"
#include "figr/util/rng.hpp"

namespace figr::grpo {

std::string_view to_string(Template t) noexcept {
  switch (t) {
    case Template::Construct: return "construct";
    case Template::AnswerReasoned: return "answer_reasoned";
    case Template::AnswerFromFigure: return "answer_from_figure";
    case Template::AnswerBare: return "answer_bare";
    case Template::EndSilent: return "end_silent";
  }
  return "?";
}

std::vector<double> ToyPolicy::probabilities(std::size_t bucket) const {
  const auto logits = row(bucket);
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(template_count);
  double z = 0.0;
  for (std::size_t j = 0; j < template_count; ++j) z += p[j] = std::exp((logits[j] - mx) / temperature);
  for (auto& v : p) v /= z;
  return p;
}

double ToyPolicy::logprob(std::size_t bucket, std::size_t token) const {
  const auto logits = row(bucket);
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp((l - mx) / temperature);
  return (logits[token] - mx) / temperature - std::log(z);
}

std::uint32_t featurize(std::string_view category, std::size_t round, bool last_exec_ok, bool figure_present,
                        std::size_t bucket_count) noexcept {
  const std::uint64_t state = round * 4 + (last_exec_ok ? 2 : 0) + (figure_present ? 1 : 0);
  const std::uint64_t h = splitmix64(fnv1a64(category) ^ splitmix64(state));
  return static_cast<std::uint32_t>(h % bucket_count);
}

std::uint32_t featurize(const rollout::ContextView& view, std::size_t bucket_count) {
  bool exec_ok = false, figure = false;
  for (auto it = view.entries.rbegin(); it != view.entries.rend(); ++it) {
    if (it->kind == rollout::EntryKind::PolicyCode) break;
    if (it->kind == rollout::EntryKind::FigureRef) figure = true;
    if (it->kind == rollout::EntryKind::InterpreterText)
      exec_ok = it->text.find("error: ") == std::string::npos;
  }
  return featurize(view.problem->category, view.round, exec_ok, figure, bucket_count);
}

namespace {

using evalbench::Category;
using figscript::Vec2;

double side(Vec2 a, Vec2 b, Vec2 p) { return figscript::cross(b - a, p - a); }

// Counts a pair when either segment's endpoints fall on opposite sides of the
// other's supporting line, i.e. half of the crossing test.
std::int64_t estimate_crossings(const evalbench::Scene& sc) {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < sc.segments.size(); ++i)
    for (std::size_t j = i + 1; j < sc.segments.size(); ++j) {
      const auto [a, b] = sc.segments[i];
      const auto [c, d] = sc.segments[j];
      n += side(a, b, c) * side(a, b, d) < 0 || side(c, d, a) * side(c, d, b) < 0;
    }
  return n;
}

std::int64_t estimate_hits(const evalbench::Scene& sc) {
  const double r2 = static_cast<double>(sc.radius * sc.radius);
  auto inside = [&](Vec2 p) { return figscript::dot(p - sc.center, p - sc.center) < r2; };
  return inside(sc.p) || inside(sc.q) ? 2 : 0;
}

std::int64_t estimate_lattice(const evalbench::Scene& sc) {
  double area2 = 0.0, perimeter = 0.0;
  for (std::size_t i = 0, j = sc.polygon.size() - 1; i < sc.polygon.size(); j = i++) {
    area2 += figscript::cross(sc.polygon[j], sc.polygon[i]);
    perimeter += figscript::norm(sc.polygon[i] - sc.polygon[j]);
  }
  return std::max<std::int64_t>(0, std::llround(std::fabs(area2) / 2 - perimeter / 2 + 1));
}

}  // namespace

std::string mental_estimate(const evalbench::ProblemRecord& problem) {
  const auto sc = evalbench::parse_question(problem.question);
  if (!sc) return "0";
  switch (sc->category) {
    case Category::SegmentCrossings: return std::to_string(estimate_crossings(*sc));
    case Category::CircleLineHits: return std::to_string(estimate_hits(*sc));
    case Category::PolygonLatticePoints: return std::to_string(estimate_lattice(*sc));
    case Category::ArithmeticNoFigure: return std::to_string(evalbench::oracle_answer(*sc));
  }
  return "0";
}

std::string render_template(Template t, const evalbench::ProblemRecord& problem, const rollout::ContextView& view) {
  switch (t) {
    case Template::Construct: {
      const auto sc = evalbench::parse_question(problem.question);
      return "Let me draw the configuration first.\n```figscript\n" +
             (sc ? evalbench::build_construction(*sc) : std::string("point(0, 0)")) + "\n```";
    }
    case Template::AnswerReasoned: {
      const auto v = mental_estimate(problem);
      return fmt::format("Working from the given numbers directly, the result is {}.\n<answer>{}</answer> <End>", v, v);
    }
    case Template::AnswerFromFigure: {
      const auto fb = evalbench::latest_feedback(view);
      const auto v = (fb ? evalbench::read_feedback_value(*fb) : std::nullopt).value_or("0");
      return fmt::format("Reading the value off the interpreter output: {}.\n<answer>{}</answer> <End>", v, v);
    }
    case Template::AnswerBare: return "<answer>" + mental_estimate(problem) + "</answer> <End>";
    case Template::EndSilent: return "<End>";
  }
  return "<End>";
}

namespace {

class ToySession final : public rollout::PolicySession {
 public:
  ToySession(const ToyPolicy& policy, const evalbench::ProblemRecord& problem, std::uint64_t seed)
      : policy_(policy), problem_(problem), rng_(seed) {}

  rollout::PolicyReply act(const rollout::ContextView& view) override {
    const auto bucket = featurize(view, policy_.bucket_count);
    const auto probs = policy_.probabilities(bucket);
    const double u = rng_.uniform01();
    std::size_t token = 0;
    double acc = probs[0];
    while (token + 1 < probs.size() && u >= acc) acc += probs[++token];
    rollout::PolicyReply reply;
    reply.payload = render_template(static_cast<Template>(token), problem_, view);
    reply.trace.push_back({bucket, static_cast<std::uint32_t>(token), policy_.logprob(bucket, token)});
    return reply;
  }

 private:
  const ToyPolicy& policy_;
  const evalbench::ProblemRecord& problem_;
  Rng rng_;
};

}  // namespace

std::unique_ptr<rollout::PolicySession> ToyPolicyHandle::open(const evalbench::ProblemRecord& problem,
                                                              std::uint64_t seed) const {
  return std::make_unique<ToySession>(policy_, problem, seed);
}

}  // namespace figr::grpo
