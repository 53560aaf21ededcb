// SPDX-License-Identifier: Apache-2.0
#include "figr/reward/reward.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "figr/util/error.hpp"
#include "figr/util/text.hpp"

namespace figr::reward {
namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  return out;
}

std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  // No hex, inf or nan spellings.
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == 'e' || c == 'E' || c == '+'))
      return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::optional<double> parse_numeric(std::string_view text) {
  const std::string s = strip_spaces(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  if (s.find('/', slash + 1) != std::string::npos) return std::nullopt;
  const auto num = parse_decimal(std::string_view(s).substr(0, slash));
  const auto den = parse_decimal(std::string_view(s).substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

int accuracy_reward(std::optional<std::string_view> predicted, std::string_view gold, const AnswerMatchRule& rule) {
  if (rule.abs_tol < 0) throw Error(Errc::InvalidArgument, "abs_tol must be non-negative");
  if (!predicted) return 0;
  if (rule.mode == MatchMode::Exact) return trim(*predicted) == trim(gold) ? 1 : 0;
  const auto p = parse_numeric(*predicted), g = parse_numeric(gold);
  if (p && g) return std::fabs(*p - *g) <= rule.abs_tol ? 1 : 0;
  return to_lower(strip_spaces(*predicted)) == to_lower(strip_spaces(gold)) ? 1 : 0;
}

int format_reward(std::string_view payload) {
  const auto close = payload.rfind("</answer>");
  if (close == std::string_view::npos || !rollout::extract_answer_span(payload)) return 0;
  const auto open = payload.rfind("<answer>", close);
  return trim(payload.substr(0, open)).empty() ? 0 : 1;
}

int format_reward(const rollout::Trajectory& trajectory) {
  const auto* a = trajectory.final_action();
  return a ? format_reward(a->payload) : 0;
}

double visual_reward(bool answer_correct, int s, bool exec_ok, bool invoked_code) {
  if (s != 0 && s != 1) throw Error(Errc::InvalidArgument, "suitability must be 0 or 1");
  if (!invoked_code || !exec_ok || !answer_correct) return 0.0;
  return s == 1 ? 1.0 : 0.2;
}

RewardBreakdown total_reward(const rollout::Trajectory& trajectory, const evalbench::ProblemRecord& problem,
                             const AnswerMatchRule& rule, const RewardWeights& weights) {
  if (!problem.suitability)
    throw Error(Errc::MissingSuitabilityTag, "problem \"" + problem.id + "\" has no suitability tag");
  RewardBreakdown b;
  b.suitability = *problem.suitability;
  const auto answer = rollout::extract_answer(trajectory);
  b.r_acc = accuracy_reward(answer ? std::optional<std::string_view>(*answer) : std::nullopt, problem.gold_answer, rule);
  b.r_fmt = format_reward(trajectory);
  const auto behavior = rollout::count_behavior(trajectory);
  const bool invoked = behavior.code_blocks >= 1;
  b.exec_ok = invoked && behavior.code_passes == behavior.code_blocks;
  b.answer_correct = b.r_acc == 1;
  b.format_ok = b.r_fmt == 1;
  b.r_vis = visual_reward(b.answer_correct, b.suitability, b.exec_ok, invoked);
  b.total = weights.acc * b.r_acc + weights.fmt * b.r_fmt + weights.vis * b.r_vis;
  return b;
}

}  // namespace figr::reward
