// SPDX-License-Identifier: Apache-2.0
#include <spdlog/spdlog.h>

#include "figr/rollout/trajectory.hpp"
#include "figr/util/error.hpp"
#include "figr/util/text.hpp"

namespace figr::rollout {

const Action* Trajectory::final_action() const noexcept {
  for (auto it = turns.rbegin(); it != turns.rend(); ++it)
    if (it->action.kind != ActionKind::Code) return &it->action;
  return nullptr;
}

std::vector<MacroToken> Trajectory::macro_tokens() const {
  std::vector<MacroToken> out;
  for (const auto& t : turns) out.insert(out.end(), t.action.logprob_trace.begin(), t.action.logprob_trace.end());
  return out;
}

std::optional<std::string> extract_answer(const Trajectory& trajectory) {
  const auto* a = trajectory.final_action();
  if (!a) return std::nullopt;
  return extract_answer_span(a->payload);
}

BehaviorCounters count_behavior(const Trajectory& trajectory) {
  BehaviorCounters b;
  for (const auto& t : trajectory.turns) {
    b.response_tokens += count_tokens(t.action.payload);
    if (t.action.kind != ActionKind::Code) continue;
    ++b.code_blocks;
    b.code_lines += count_nonempty_lines(t.action.code);
    if (t.outcome && t.outcome->exec_ok) ++b.code_passes;
  }
  return b;
}

namespace {

Action classify_or_text(const std::string& payload, const EpisodeConfig& config, std::vector<std::string>* notes) {
  try {
    return classify_action(payload, config.end_sentinel);
  } catch (const Error& e) {
    if (notes) notes->push_back(e.what());
    Action a;
    a.kind = ActionKind::Text;
    a.payload = payload;
    return a;
  }
}

}  // namespace

Trajectory run_episode(const evalbench::ProblemRecord& problem, const PolicyHandle& policy,
                       const EpisodeConfig& config, std::uint64_t seed) {
  config.validate();
  Trajectory t;
  t.problem = problem;
  t.config = config;
  t.seed = seed;
  Context ctx(t.problem);
  auto session = policy.open(t.problem, seed);

  for (std::size_t turn = 0;; ++turn) {
    if (turn >= config.max_turns) {
      t.notes.push_back("TurnLimit: " + std::to_string(config.max_turns) + " turns without an end action");
      break;
    }
    const auto view = make_view(ctx, config);
    PolicyReply reply = session->act(view);
    Turn tr;
    tr.action = classify_or_text(reply.payload, config, &t.notes);
    tr.action.logprob_trace = std::move(reply.trace);

    if (view.final_turn) {
      if (tr.action.kind == ActionKind::Code) {
        t.notes.push_back("RoundLimitExceeded: code on the final turn after " + std::to_string(config.max_rounds) +
                          " rounds was not executed");
        tr.action.kind = ActionKind::Text;
        tr.action.code.clear();
        tr.truncated = true;
        append_truncated(ctx, tr.action);
      } else {
        step(ctx, tr.action, config);
      }
      t.turns.push_back(std::move(tr));
      break;
    }

    tr.outcome = step(ctx, tr.action, config);
    if (tr.outcome && tr.outcome->raster) {
      const auto& r = *tr.outcome->raster;
      tr.figure = FigureInfo{ctx.entries().back().figure_sha256, {}, r.width, r.height, r.world_window};
    }
    const bool ended = tr.action.kind == ActionKind::End;
    t.turns.push_back(std::move(tr));
    if (ended) break;
    if (ctx.token_budget_used() >= config.token_budget) {
      t.budget_exhausted = true;
      t.notes.push_back("BudgetExhausted: " + std::to_string(ctx.token_budget_used()) + " tokens used");
      break;
    }
  }

  t.final_answer = extract_answer(t);
  t.behavior = count_behavior(t);
  t.context_hash = ctx.hash();
  spdlog::debug("episode {} seed {} turns {}", t.problem.id, seed, t.turns.size());
  return t;
}

std::string replay_context_hash(const Trajectory& trajectory) {
  Context ctx(trajectory.problem);
  for (const auto& turn : trajectory.turns) {
    Action a = classify_or_text(turn.action.payload, trajectory.config, nullptr);
    if (turn.truncated) {
      a.kind = ActionKind::Text;
      append_truncated(ctx, a);
    } else {
      step(ctx, a, trajectory.config);
    }
  }
  return ctx.hash();
}

}  // namespace figr::rollout
