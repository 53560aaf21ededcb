// SPDX-License-Identifier: Apache-2.0
#include "figr/evalbench/metrics.hpp"

#include "figr/util/error.hpp"
#include "figr/util/text.hpp"

namespace figr::evalbench {

double pass_at_1(std::span<const bool> correctness) {
  if (correctness.empty()) throw Error(Errc::EmptyList, "pass@1 needs at least one response");
  std::size_t correct = 0;
  for (bool c : correctness) correct += c;
  return static_cast<double>(correct) / static_cast<double>(correctness.size());
}

double pass_at_1(const std::vector<bool>& correctness) {
  if (correctness.empty()) throw Error(Errc::EmptyList, "pass@1 needs at least one response");
  std::size_t correct = 0;
  for (bool c : correctness) correct += c;
  return static_cast<double>(correct) / static_cast<double>(correctness.size());
}

BehaviorReport behavior_metrics(std::span<const rollout::Trajectory> trajectories) {
  if (trajectories.empty()) throw Error(Errc::EmptyList, "behavior metrics need at least one trajectory");
  BehaviorReport r;
  r.trajectories = trajectories.size();
  std::size_t tokens = 0, blocks = 0, lines = 0, passes = 0;
  for (const auto& t : trajectories) {
    bool invoked = false;
    for (const auto& turn : t.turns) {
      tokens += count_tokens(turn.action.payload);
      if (turn.action.kind != rollout::ActionKind::Code) continue;
      invoked = true;
      ++blocks;
      lines += count_nonempty_lines(turn.action.code);
      passes += turn.outcome && turn.outcome->exec_ok;
    }
    r.code_count += invoked;
  }
  const double n = static_cast<double>(trajectories.size());
  r.mean_response_tokens = static_cast<double>(tokens) / n;
  r.code_ratio = static_cast<double>(r.code_count) / n;
  if (blocks) {
    r.mean_code_lines = static_cast<double>(lines) / static_cast<double>(blocks);
    r.code_pass_rate = static_cast<double>(passes) / static_cast<double>(blocks);
  }
  return r;
}

}  // namespace figr::evalbench
