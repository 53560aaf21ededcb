// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "figr/evalbench/problem.hpp"
#include "figr/reward/breakdown.hpp"
#include "figr/rollout/trajectory.hpp"

namespace figr::reward {

enum class MatchMode { Exact, NormalizedNumeric };

struct AnswerMatchRule {
  MatchMode mode = MatchMode::NormalizedNumeric;
  double abs_tol = 1e-6;
};

struct RewardWeights {
  double acc = 1.0;
  double fmt = 1.0;
  double vis = 1.0;  // 0 disables the adaptive visual term

  static RewardWeights without_visual() { return {1.0, 1.0, 0.0}; }
};

/// Parses "3", "-2.5", "1e3", "7/4", "-1/2" (whitespace ignored).
std::optional<double> parse_numeric(std::string_view text);

/// 1 iff `predicted` matches `gold`. Numeric answers compare within abs_tol
/// in normalized mode; anything else compares case-insensitively with all
/// whitespace removed. Exact mode compares trimmed strings byte for byte.
int accuracy_reward(std::optional<std::string_view> predicted, std::string_view gold, const AnswerMatchRule& rule = {});

/// 1 iff the payload has non-empty reasoning text before its answer span.
int format_reward(std::string_view final_payload);
int format_reward(const rollout::Trajectory& trajectory);

/// 1.0 for a correct answer with a successful construction on a suitable
/// problem, 0.2 on an unsuitable one, 0 otherwise.
double visual_reward(bool answer_correct, int s, bool exec_ok, bool invoked_code);

/// Throws MissingSuitabilityTag when the problem has no s.
RewardBreakdown total_reward(const rollout::Trajectory& trajectory, const evalbench::ProblemRecord& problem,
                             const AnswerMatchRule& rule = {}, const RewardWeights& weights = {});

}  // namespace figr::reward
