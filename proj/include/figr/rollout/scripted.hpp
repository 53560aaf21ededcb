// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "figr/rollout/policy.hpp"

namespace figr::rollout {

/// Replays a fixed list of payloads, then "<End>" forever.
class ScriptedPolicy final : public PolicyHandle {
 public:
  explicit ScriptedPolicy(std::vector<std::string> payloads) : payloads_(std::move(payloads)) {}
  std::unique_ptr<PolicySession> open(const evalbench::ProblemRecord& problem, std::uint64_t seed) const override;

 private:
  std::vector<std::string> payloads_;
};

/// Answers the gold answer with a line of reasoning.
class OraclePolicy final : public PolicyHandle {
 public:
  std::unique_ptr<PolicySession> open(const evalbench::ProblemRecord& problem, std::uint64_t seed) const override;
};

/// Never produces an answer span.
class SilentPolicy final : public PolicyHandle {
 public:
  std::unique_ptr<PolicySession> open(const evalbench::ProblemRecord& problem, std::uint64_t seed) const override;
};

}  // namespace figr::rollout
