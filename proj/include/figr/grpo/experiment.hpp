// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "figr/evalbench/problem.hpp"
#include "figr/grpo/grpo.hpp"

namespace figr::grpo {

/// 20 geometry problems (s=1) spread over the three figure categories and
/// 20 arithmetic problems (s=0).
std::vector<evalbench::ProblemRecord> arm_dataset(std::uint64_t seed);

struct ArmTrialResult {
  std::uint64_t seed = 0;
  bool arm = true;
  double accuracy = 0.0;       // pass@1 over the training set
  double code_ratio_s1 = 0.0;  // mean per-problem code ratio
  double code_ratio_s0 = 0.0;
  double gap() const noexcept { return code_ratio_s1 - code_ratio_s0; }
};

/// Trains with `base` (visual weight zeroed when !arm) and evaluates the final
/// policy with eval_k samples per problem.
ArmTrialResult arm_trial(const std::vector<evalbench::ProblemRecord>& dataset, std::uint64_t seed, bool arm,
                         TrainConfig base, std::size_t eval_k = 16);

}  // namespace figr::grpo
