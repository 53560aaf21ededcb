// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "figr/rollout/trajectory.hpp"

namespace figr::bridge {

inline constexpr const char* kProtocolVersion = "figr/1";

/// Wire name of a context entry: text, code, interpreter_text or figure.
std::string_view wire_kind(rollout::EntryKind kind) noexcept;

nlohmann::json config_to_json(const rollout::EpisodeConfig& config);
/// Applies the advertised fields onto `base`, keeping its exec limits.
rollout::EpisodeConfig config_from_json(const nlohmann::json& j, rollout::EpisodeConfig base = {});

/// ActRequest frame for one turn. Figures travel as base64 PGM plus summary.
nlohmann::json act_frame(const std::string& session_id, const rollout::ContextView& view, std::uint64_t seed);

/// Rebuilds the problem and view carried by an act frame. The returned view
/// points into `problem`. Throws ProtocolError on malformed frames.
rollout::ContextView view_from_act_frame(const nlohmann::json& frame, evalbench::ProblemRecord& problem);

nlohmann::json error_frame(const std::string& session_id, std::string_view code, const std::string& message);

struct TranscriptFrame {
  bool from_server = true;
  nlohmann::json frame;
};

struct Transcript {
  std::string session_id;
  std::vector<TranscriptFrame> frames;
};

/// One {"dir": "server"|"client", "frame": {...}} object per line.
void write_transcript(std::ostream& out, const Transcript& transcript);
Transcript read_transcript(std::istream& in);

/// True when no two consecutive frames share a direction.
bool frames_alternate(const Transcript& transcript) noexcept;

struct ReplayedEpisode {
  std::string episode_id;
  std::string logged_hash;  // from the episode_end frame
  rollout::Trajectory trajectory;
  bool matches() const { return trajectory.context_hash == logged_hash; }
};

/// Re-runs every completed episode of a transcript through rollout.step,
/// feeding back the logged client payloads in order.
std::vector<ReplayedEpisode> replay_transcript(const Transcript& transcript, const rollout::EpisodeConfig& base = {});

}  // namespace figr::bridge
