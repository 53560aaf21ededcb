// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "figr/rollout/trajectory.hpp"

namespace figr::evalbench {

/// Mean of the indicators; throws EmptyList for k = 0.
double pass_at_1(std::span<const bool> correctness);
double pass_at_1(const std::vector<bool>& correctness);

struct BehaviorReport {
  double mean_response_tokens = 0.0;
  std::size_t trajectories = 0;
  std::size_t code_count = 0;  // trajectories invoking code
  double code_ratio = 0.0;
  double mean_code_lines = 0.0;
  std::optional<double> code_pass_rate;  // absent without code blocks
};

/// Recomputes counters from the turns themselves, not the cached behavior.
BehaviorReport behavior_metrics(std::span<const rollout::Trajectory> trajectories);

}  // namespace figr::evalbench
