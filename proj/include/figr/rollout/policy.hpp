// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "figr/rollout/context.hpp"

namespace figr::rollout {

struct PolicyReply {
  std::string payload;
  std::vector<MacroToken> trace;
};

/// One episode's worth of policy state. act() is called once per turn;
/// throwing Error(PolicyUnavailable) aborts the episode.
class PolicySession {
 public:
  virtual ~PolicySession() = default;
  virtual PolicyReply act(const ContextView& view) = 0;
};

class PolicyHandle {
 public:
  virtual ~PolicyHandle() = default;
  /// Must be safe to call concurrently; sessions are used by one thread.
  virtual std::unique_ptr<PolicySession> open(const evalbench::ProblemRecord& problem, std::uint64_t seed) const = 0;
};

}  // namespace figr::rollout
