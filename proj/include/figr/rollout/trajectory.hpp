// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "figr/reward/breakdown.hpp"
#include "figr/rollout/context.hpp"
#include "figr/rollout/policy.hpp"

namespace figr::rollout {

struct FigureInfo {
  std::string sha256;  // of the PGM bytes
  std::string path;    // relative to the run directory, once written
  std::size_t width = 0;
  std::size_t height = 0;
  figscript::WorldWindow window;
};

struct Turn {
  Action action;
  std::optional<figscript::ExecOutcome> outcome;
  std::optional<FigureInfo> figure;  // set when the outcome produced a raster
  bool truncated = false;  // code on the forced final turn, kept as text
};

struct BehaviorCounters {
  std::size_t response_tokens = 0;
  std::size_t code_blocks = 0;
  std::size_t code_lines = 0;
  std::size_t code_passes = 0;
  friend bool operator==(const BehaviorCounters&, const BehaviorCounters&) = default;
};

struct Trajectory {
  evalbench::ProblemRecord problem;
  EpisodeConfig config;
  std::uint64_t seed = 0;
  std::vector<Turn> turns;
  std::optional<std::string> final_answer;
  std::optional<reward::RewardBreakdown> reward;
  BehaviorCounters behavior;
  bool budget_exhausted = false;
  std::vector<std::string> notes;
  std::string context_hash;

  /// Payload of the last Text or End turn, if any; the answer is read from here.
  const Action* final_action() const noexcept;
  /// Macro-tokens over all turns, in order.
  std::vector<MacroToken> macro_tokens() const;
};

/// Runs one episode. Errors thrown by the policy propagate.
Trajectory run_episode(const evalbench::ProblemRecord& problem, const PolicyHandle& policy,
                       const EpisodeConfig& config, std::uint64_t seed);

std::optional<std::string> extract_answer(const Trajectory& trajectory);

BehaviorCounters count_behavior(const Trajectory& trajectory);

/// Rebuilds the context by stepping through the logged payloads, re-running
/// every code block under the logged config. Returns the rebuilt context hash.
std::string replay_context_hash(const Trajectory& trajectory);

}  // namespace figr::rollout
