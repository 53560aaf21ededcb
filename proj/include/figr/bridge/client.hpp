// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "figr/bridge/channel.hpp"
#include "figr/bridge/protocol.hpp"
#include "figr/rollout/policy.hpp"

namespace figr::bridge {

struct ClientResult {
  Transcript transcript;
  std::vector<nlohmann::json> episode_ends;
};

/// Reference client: drives an in-process policy through the wire protocol
/// until the server says bye. Throws on error frames or protocol violations.
ClientResult run_client(FdChannel& channel, const rollout::PolicyHandle& policy,
                        std::chrono::milliseconds timeout = kDefaultActTimeout);

}  // namespace figr::bridge
