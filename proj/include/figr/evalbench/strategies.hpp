// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "figr/rollout/policy.hpp"

namespace figr::evalbench {

/// Value of the "ans = v" feedback line, else the last number printed.
std::optional<std::string> read_feedback_value(std::string_view feedback);

/// Latest interpreter text in the view, if any.
std::optional<std::string> latest_feedback(const rollout::ContextView& view);

/// Draws the scene parsed from the question, then answers from the feedback.
class ConstructThenAnswerPolicy final : public rollout::PolicyHandle {
 public:
  std::unique_ptr<rollout::PolicySession> open(const ProblemRecord& problem, std::uint64_t seed) const override;
};

}  // namespace figr::evalbench
