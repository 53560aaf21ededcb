// SPDX-License-Identifier: Apache-2.0
#include "figr/bridge/protocol.hpp"

#include <map>

#include "figr/figscript/raster.hpp"
#include "figr/rollout/scripted.hpp"
#include "figr/util/base64.hpp"
#include "figr/util/error.hpp"
#include "figr/util/hash.hpp"

namespace figr::bridge {

using nlohmann::json;

std::string_view wire_kind(rollout::EntryKind kind) noexcept {
  switch (kind) {
    case rollout::EntryKind::PolicyText: return "text";
    case rollout::EntryKind::PolicyCode: return "code";
    case rollout::EntryKind::InterpreterText: return "interpreter_text";
    case rollout::EntryKind::FigureRef: return "figure";
  }
  return "text";
}

json config_to_json(const rollout::EpisodeConfig& c) {
  return {{"max_rounds", c.max_rounds},
          {"token_budget", c.token_budget},
          {"end_sentinel", c.end_sentinel},
          {"max_turns", c.max_turns}};
}

rollout::EpisodeConfig config_from_json(const json& j, rollout::EpisodeConfig base) {
  try {
    base.max_rounds = j.at("max_rounds").get<std::size_t>();
    base.token_budget = j.at("token_budget").get<std::size_t>();
    base.end_sentinel = j.at("end_sentinel").get<std::string>();
    base.max_turns = j.at("max_turns").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(Errc::ProtocolError, std::string("bad episode config: ") + e.what());
  }
  base.validate();
  return base;
}

json act_frame(const std::string& session_id, const rollout::ContextView& view, std::uint64_t seed) {
  json entries = json::array();
  for (const auto& e : view.entries) {
    json je = {{"kind", wire_kind(e.kind)}, {"text", e.text}};
    if (e.kind == rollout::EntryKind::FigureRef) {
      je["sha256"] = e.figure_sha256;
      if (e.figure) {
        const auto pgm = figscript::to_pgm(*e.figure);
        je["pgm_base64"] = base64_encode(pgm);
      }
    }
    entries.push_back(std::move(je));
  }
  const auto& p = *view.problem;
  return {{"type", "act"},
          {"session_id", session_id},
          {"episode_id", p.id},
          {"seed", seed},
          {"problem", {{"id", p.id}, {"question", p.question}, {"category", p.category}}},
          {"entries", std::move(entries)},
          {"round", view.round},
          {"rounds_remaining", view.rounds_remaining},
          {"budget_remaining", view.budget_remaining},
          {"final_turn", view.final_turn}};
}

rollout::ContextView view_from_act_frame(const json& f, evalbench::ProblemRecord& problem) {
  static const std::map<std::string, rollout::EntryKind, std::less<>> kinds = {
      {"text", rollout::EntryKind::PolicyText},
      {"code", rollout::EntryKind::PolicyCode},
      {"interpreter_text", rollout::EntryKind::InterpreterText},
      {"figure", rollout::EntryKind::FigureRef}};
  rollout::ContextView view;
  try {
    const auto& jp = f.at("problem");
    problem = {};
    problem.id = jp.at("id").get<std::string>();
    problem.question = jp.at("question").get<std::string>();
    problem.category = jp.value("category", std::string());
    problem.source = evalbench::ProblemSource::Imported;
    for (const auto& je : f.at("entries")) {
      rollout::ContextEntry e;
      const auto k = kinds.find(je.at("kind").get<std::string>());
      if (k == kinds.end()) throw Error(Errc::ProtocolError, "unknown entry kind " + je.at("kind").dump());
      e.kind = k->second;
      e.text = je.at("text").get<std::string>();
      if (e.kind == rollout::EntryKind::FigureRef) {
        e.figure_sha256 = je.value("sha256", std::string());
        if (je.contains("pgm_base64")) {
          const auto bytes = base64_decode(je.at("pgm_base64").get<std::string>());
          if (!bytes) throw Error(Errc::ProtocolError, "figure is not valid base64");
          auto raster = figscript::from_pgm(*bytes);
          if (!raster) throw Error(Errc::ProtocolError, "figure is not a valid PGM");
          e.figure = std::make_shared<const figscript::Raster>(std::move(*raster));
        }
      }
      view.entries.push_back(std::move(e));
    }
    view.round = f.at("round").get<std::size_t>();
    view.rounds_remaining = f.at("rounds_remaining").get<std::size_t>();
    view.budget_remaining = f.at("budget_remaining").get<std::size_t>();
    view.final_turn = f.at("final_turn").get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::ProtocolError, std::string("malformed act frame: ") + e.what());
  }
  view.problem = &problem;
  return view;
}

json error_frame(const std::string& session_id, std::string_view code, const std::string& message) {
  return {{"type", "error"}, {"session_id", session_id}, {"code", code}, {"message", message}};
}

void write_transcript(std::ostream& out, const Transcript& t) {
  for (const auto& f : t.frames)
    out << json{{"dir", f.from_server ? "server" : "client"}, {"frame", f.frame}}.dump(
               -1, ' ', false, json::error_handler_t::replace)
        << '\n';
}

Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("dir") || !j.contains("frame"))
      throw Error(Errc::ProtocolError, "transcript line " + std::to_string(n) + " is malformed");
    const auto dir = j["dir"].get<std::string>();
    if (dir != "server" && dir != "client")
      throw Error(Errc::ProtocolError, "transcript line " + std::to_string(n) + " has bad direction");
    t.frames.push_back({dir == "server", j["frame"]});
    if (t.session_id.empty() && j["frame"].contains("session_id") && j["frame"]["session_id"].is_string())
      t.session_id = j["frame"]["session_id"].get<std::string>();
  }
  return t;
}

bool frames_alternate(const Transcript& t) noexcept {
  for (std::size_t i = 1; i < t.frames.size(); ++i)
    if (t.frames[i].from_server == t.frames[i - 1].from_server) return false;
  return true;
}

std::vector<ReplayedEpisode> replay_transcript(const Transcript& t, const rollout::EpisodeConfig& base) {
  rollout::EpisodeConfig config = base;
  std::vector<ReplayedEpisode> out;
  std::optional<json> first_act;
  std::vector<std::string> payloads;
  for (const auto& f : t.frames) {
    const auto& j = f.frame;
    if (f.from_server && j.contains("proto") && j.contains("config")) {
      config = config_from_json(j["config"], base);
      continue;
    }
    const auto type = j.value("type", std::string());
    if (f.from_server && type == "act") {
      if (!first_act) first_act = j;
    } else if (!f.from_server && type == "act_response") {
      payloads.push_back(j.value("payload", std::string()));
    } else if (f.from_server && type == "episode_end") {
      if (!first_act) throw Error(Errc::ProtocolError, "episode_end without any act frame");
      evalbench::ProblemRecord problem;
      view_from_act_frame(*first_act, problem);
      const auto seed = first_act->value("seed", std::uint64_t{0});
      ReplayedEpisode r;
      r.episode_id = j.value("episode_id", std::string());
      r.logged_hash = j.value("context_hash", std::string());
      r.trajectory = rollout::run_episode(problem, rollout::ScriptedPolicy(payloads), config, seed);
      out.push_back(std::move(r));
      first_act.reset();
      payloads.clear();
    }
  }
  return out;
}

}  // namespace figr::bridge
