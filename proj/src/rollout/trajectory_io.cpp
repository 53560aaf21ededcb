// SPDX-License-Identifier: Apache-2.0
#include "figr/rollout/trajectory_io.hpp"

#include <fstream>
#include <iterator>

#include "figr/figscript/raster.hpp"
#include "figr/util/error.hpp"
#include "figr/util/hash.hpp"

namespace figr::rollout {

using nlohmann::json;

namespace {

ActionKind action_kind_from(const std::string& s) {
  if (s == "text") return ActionKind::Text;
  if (s == "code") return ActionKind::Code;
  if (s == "end") return ActionKind::End;
  throw Error(Errc::InvalidArgument, "unknown action kind \"" + s + "\"");
}

figscript::ExecErrorKind error_kind_from(const std::string& s) {
  using K = figscript::ExecErrorKind;
  for (K k : {K::ParseError, K::UnboundIdentifier, K::DomainError, K::LimitExceeded, K::EmptyScene})
    if (figscript::to_string(k) == s) return k;
  throw Error(Errc::InvalidArgument, "unknown exec error kind \"" + s + "\"");
}

json reward_to_json(const reward::RewardBreakdown& r) {
  return {{"r_acc", r.r_acc},
          {"r_fmt", r.r_fmt},
          {"r_vis", r.r_vis},
          {"total", r.total},
          {"answer_correct", r.answer_correct},
          {"format_ok", r.format_ok},
          {"s", r.suitability},
          {"exec_ok", r.exec_ok}};
}

reward::RewardBreakdown reward_from_json(const json& j) {
  reward::RewardBreakdown r;
  r.r_acc = j.at("r_acc").get<int>();
  r.r_fmt = j.at("r_fmt").get<int>();
  r.r_vis = j.at("r_vis").get<double>();
  r.total = j.at("total").get<double>();
  r.answer_correct = j.at("answer_correct").get<bool>();
  r.format_ok = j.at("format_ok").get<bool>();
  r.suitability = j.at("s").get<int>();
  r.exec_ok = j.at("exec_ok").get<bool>();
  return r;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

json problem_to_json(const evalbench::ProblemRecord& p) {
  json j = {{"id", p.id}, {"question", p.question}, {"gold_answer", p.gold_answer}, {"category", p.category}};
  j["s"] = p.suitability ? json(*p.suitability) : json(nullptr);
  j["source"] = p.source == evalbench::ProblemSource::Synthetic ? "synthetic" : "imported";
  return j;
}

evalbench::ProblemRecord problem_from_json(const json& j) {
  evalbench::ProblemRecord p;
  p.id = j.at("id").get<std::string>();
  p.question = j.at("question").get<std::string>();
  p.gold_answer = j.at("gold_answer").get<std::string>();
  p.category = j.value("category", std::string());
  if (j.contains("s") && !j["s"].is_null()) p.suitability = j["s"].get<int>();
  p.source = j.value("source", std::string("imported")) == "synthetic" ? evalbench::ProblemSource::Synthetic
                                                                       : evalbench::ProblemSource::Imported;
  return p;
}

json trajectory_to_json(const Trajectory& t) {
  json turns = json::array();
  for (const auto& turn : t.turns) {
    json trace = json::array();
    for (const auto& m : turn.action.logprob_trace) trace.push_back({m.state, m.token, m.logprob});
    json jt = {{"kind", to_string(turn.action.kind)}, {"payload", turn.action.payload}, {"trace", trace}};
    if (turn.truncated) jt["truncated"] = true;
    if (turn.outcome) {
      const auto& o = *turn.outcome;
      json out = {{"exec_ok", o.exec_ok},
                  {"text_feedback", o.text_feedback},
                  {"stats", {{"statements_run", o.stats.statements_run}, {"instructions", o.stats.instructions}}}};
      if (o.error)
        out["error"] = {{"kind", figscript::to_string(o.error->kind)},
                        {"statement", o.error->statement},
                        {"column", o.error->column},
                        {"offset", o.error->offset},
                        {"message", o.error->message}};
      else
        out["error"] = nullptr;
      if (turn.figure) {
        const auto& f = *turn.figure;
        const auto& w = f.window;
        out["figure"] = {{"sha256", f.sha256},
                         {"path", f.path},
                         {"width", f.width},
                         {"height", f.height},
                         {"window", {w.xmin, w.xmax, w.ymin, w.ymax}}};
      } else {
        out["figure"] = nullptr;
      }
      jt["outcome"] = std::move(out);
    }
    turns.push_back(std::move(jt));
  }
  const auto& c = t.config;
  json j = {{"problem", problem_to_json(t.problem)},
            {"config",
             {{"max_rounds", c.max_rounds},
              {"token_budget", c.token_budget},
              {"end_sentinel", c.end_sentinel},
              {"max_turns", c.max_turns},
              {"instruction_cap", c.exec_limits.instruction_cap},
              {"width", c.exec_limits.width},
              {"height", c.exec_limits.height}}},
            {"seed", t.seed},
            {"turns", std::move(turns)},
            {"behavior",
             {{"response_tokens", t.behavior.response_tokens},
              {"code_blocks", t.behavior.code_blocks},
              {"code_lines", t.behavior.code_lines},
              {"code_passes", t.behavior.code_passes}}},
            {"budget_exhausted", t.budget_exhausted},
            {"notes", t.notes},
            {"context_hash", t.context_hash}};
  j["final_answer"] = t.final_answer ? json(*t.final_answer) : json(nullptr);
  j["reward"] = t.reward ? reward_to_json(*t.reward) : json(nullptr);
  return j;
}

Trajectory trajectory_from_json(const json& j, const std::filesystem::path& figure_root) {
  Trajectory t;
  t.problem = problem_from_json(j.at("problem"));
  const auto& c = j.at("config");
  t.config.max_rounds = c.at("max_rounds").get<std::size_t>();
  t.config.token_budget = c.at("token_budget").get<std::size_t>();
  t.config.end_sentinel = c.value("end_sentinel", std::string(kEndSentinel));
  t.config.max_turns = c.value("max_turns", t.config.max_turns);
  t.config.exec_limits.instruction_cap = c.at("instruction_cap").get<std::uint64_t>();
  t.config.exec_limits.width = c.at("width").get<std::size_t>();
  t.config.exec_limits.height = c.at("height").get<std::size_t>();
  t.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jt : j.at("turns")) {
    Turn turn;
    turn.action.kind = action_kind_from(jt.at("kind").get<std::string>());
    turn.action.payload = jt.at("payload").get<std::string>();
    for (const auto& m : jt.at("trace"))
      turn.action.logprob_trace.push_back({m.at(0).get<std::uint32_t>(), m.at(1).get<std::uint32_t>(), m.at(2).get<double>()});
    turn.truncated = jt.value("truncated", false);
    if (turn.action.kind == ActionKind::Code) turn.action.code = classify_action(turn.action.payload, t.config.end_sentinel).code;
    if (jt.contains("outcome")) {
      const auto& o = jt["outcome"];
      figscript::ExecOutcome out;
      out.exec_ok = o.at("exec_ok").get<bool>();
      out.text_feedback = o.at("text_feedback").get<std::string>();
      out.stats.statements_run = o.at("stats").at("statements_run").get<std::size_t>();
      out.stats.instructions = o.at("stats").at("instructions").get<std::uint64_t>();
      if (!o.at("error").is_null()) {
        const auto& e = o["error"];
        out.error = figscript::ExecError{error_kind_from(e.at("kind").get<std::string>()), e.at("statement").get<std::size_t>(),
                                         e.at("column").get<std::size_t>(), e.at("offset").get<std::size_t>(),
                                         e.at("message").get<std::string>()};
      }
      if (!o.at("figure").is_null()) {
        const auto& f = o["figure"];
        const auto& w = f.at("window");
        FigureInfo info{f.at("sha256").get<std::string>(), f.value("path", std::string()),
                        f.at("width").get<std::size_t>(), f.at("height").get<std::size_t>(),
                        {w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(), w.at(3).get<double>()}};
        if (!figure_root.empty() && !info.path.empty()) {
          const auto bytes = read_file(figure_root / info.path);
          if (!bytes.empty() && sha256_hex(bytes) == info.sha256) {
            if (auto raster = figscript::from_pgm(bytes)) {
              raster->world_window = info.window;
              out.raster = std::move(*raster);
            }
          }
        }
        turn.figure = std::move(info);
      }
      turn.outcome = std::move(out);
    }
    t.turns.push_back(std::move(turn));
  }
  const auto& b = j.at("behavior");
  t.behavior = {b.at("response_tokens").get<std::size_t>(), b.at("code_blocks").get<std::size_t>(),
                b.at("code_lines").get<std::size_t>(), b.at("code_passes").get<std::size_t>()};
  t.budget_exhausted = j.value("budget_exhausted", false);
  t.notes = j.value("notes", std::vector<std::string>{});
  t.context_hash = j.value("context_hash", std::string());
  if (!j.at("final_answer").is_null()) t.final_answer = j["final_answer"].get<std::string>();
  if (!j.at("reward").is_null()) t.reward = reward_from_json(j["reward"]);
  return t;
}

void write_figures(Trajectory& t, const std::filesystem::path& run_dir, const std::string& subdir) {
  for (auto& turn : t.turns) {
    if (!turn.outcome || !turn.outcome->raster || !turn.figure) continue;
    const auto rel = std::filesystem::path(subdir) / (turn.figure->sha256 + ".pgm");
    const auto full = run_dir / rel;
    turn.figure->path = rel.generic_string();
    if (std::filesystem::exists(full)) continue;
    std::filesystem::create_directories(full.parent_path());
    const auto bytes = figscript::to_pgm(*turn.outcome->raster);
    std::ofstream out(full, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::Io, "cannot write " + full.string());
  }
}

void write_jsonl(std::ostream& out, const std::vector<Trajectory>& trajectories) {
  for (const auto& t : trajectories) out << trajectory_to_json(t).dump() << '\n';
}

std::vector<Trajectory> read_jsonl(std::istream& in, const std::filesystem::path& figure_root) {
  std::vector<Trajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trajectory_from_json(json::parse(line), figure_root));
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidArgument, "trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace figr::rollout
