// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "figr/bridge/channel.hpp"
#include "figr/bridge/protocol.hpp"
#include "figr/reward/reward.hpp"

namespace figr::bridge {

struct EpisodeJob {
  evalbench::ProblemRecord problem;
  std::uint64_t seed = 0;
};

/// Thread-safe FIFO of episodes shared by all sessions.
class WorkQueue {
 public:
  explicit WorkQueue(std::vector<EpisodeJob> jobs) : jobs_(std::move(jobs)) {}
  /// Index and job of the next episode.
  std::optional<std::pair<std::size_t, EpisodeJob>> pop();
  bool drained() const;
  std::size_t size() const noexcept { return jobs_.size(); }

 private:
  std::vector<EpisodeJob> jobs_;
  std::size_t next_ = 0;
  mutable std::mutex mu_;
};

struct ServeConfig {
  rollout::EpisodeConfig episode;
  reward::AnswerMatchRule rule;
  reward::RewardWeights weights;
  std::chrono::milliseconds act_timeout = kDefaultActTimeout;
};

struct ServedEpisode {
  std::size_t job_index = 0;
  rollout::Trajectory trajectory;
};

struct SessionResult {
  Transcript transcript;
  std::vector<ServedEpisode> episodes;
  /// Set when the session ended on an error frame; the in-flight job, if any,
  /// is reported in failed_job.
  std::optional<std::string> error;
  std::optional<std::size_t> failed_job;
};

/// Runs one session to completion: handshake, then episodes pulled from the
/// queue until it drains. Never throws for peer misbehaviour.
SessionResult serve_session(FdChannel& channel, WorkQueue& queue, const ServeConfig& config,
                            const std::string& session_id);

/// Accepts connections, one session each, until the queue has drained and
/// every session has finished. Results are in session-id order.
std::vector<SessionResult> serve_tcp(TcpListener& listener, WorkQueue& queue, const ServeConfig& config);

}  // namespace figr::bridge
