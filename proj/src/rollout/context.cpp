// SPDX-License-Identifier: Apache-2.0
#include "figr/rollout/context.hpp"

#include <algorithm>

#include "figr/figscript/raster.hpp"
#include "figr/util/error.hpp"
#include "figr/util/hash.hpp"
#include "figr/util/text.hpp"

namespace figr::rollout {

std::string_view to_string(EntryKind kind) noexcept {
  switch (kind) {
    case EntryKind::PolicyText: return "text";
    case EntryKind::PolicyCode: return "code";
    case EntryKind::InterpreterText: return "interpreter_text";
    case EntryKind::FigureRef: return "figure";
  }
  return "?";
}

void EpisodeConfig::validate() const {
  if (max_rounds < 1) throw Error(Errc::InvalidArgument, "max_rounds must be at least 1");
  if (token_budget < 1) throw Error(Errc::InvalidArgument, "token_budget must be at least 1");
  if (max_turns < 1) throw Error(Errc::InvalidArgument, "max_turns must be at least 1");
  if (end_sentinel.empty()) throw Error(Errc::InvalidArgument, "end_sentinel must be nonempty");
  if (exec_limits.instruction_cap == 0) throw Error(Errc::InvalidArgument, "instruction_cap must be positive");
}

namespace {

void put(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}

std::size_t turn_tokens(std::string_view payload) { return std::max<std::size_t>(1, count_tokens(payload)); }

}  // namespace

std::string Context::hash() const {
  std::string canon = "figr-context/1";
  put(canon, problem_->id);
  put(canon, problem_->question);
  put(canon, std::to_string(round_));
  put(canon, finished_ ? "1" : "0");
  for (const auto& e : entries_) {
    put(canon, to_string(e.kind));
    put(canon, e.text);
    put(canon, e.figure_sha256);
  }
  return sha256_hex(canon);
}

std::optional<figscript::ExecOutcome> step(Context& ctx, const Action& action, const EpisodeConfig& config) {
  if (ctx.finished_) throw Error(Errc::EpisodeFinished, "context is frozen after the end action");
  switch (action.kind) {
    case ActionKind::Text:
    case ActionKind::End:
      ctx.entries_.push_back({EntryKind::PolicyText, action.payload, nullptr, {}, {}});
      ctx.tokens_ += turn_tokens(action.payload);
      ctx.finished_ = action.kind == ActionKind::End;
      return std::nullopt;
    case ActionKind::Code: break;
  }
  if (ctx.round_ >= config.max_rounds)
    throw Error(Errc::RoundLimitExceeded,
                "code action at round " + std::to_string(ctx.round_) + " of " + std::to_string(config.max_rounds));
  auto outcome = figscript::run_source(action.code, config.exec_limits);
  ctx.entries_.push_back({EntryKind::PolicyCode, action.payload, nullptr, {}, {}});
  ctx.entries_.push_back({EntryKind::InterpreterText, outcome.feedback_for_context(), nullptr, {}, {}});
  if (outcome.raster) {
    const auto pgm = figscript::to_pgm(*outcome.raster);
    ctx.entries_.push_back({EntryKind::FigureRef, figscript::raster_summary(*outcome.raster),
                            std::make_shared<const figscript::Raster>(*outcome.raster), sha256_hex(pgm), {}});
  }
  ++ctx.round_;
  ctx.tokens_ += turn_tokens(action.payload);
  return outcome;
}

void append_truncated(Context& ctx, const Action& action) {
  if (ctx.finished_) throw Error(Errc::EpisodeFinished, "context is frozen after the end action");
  ctx.entries_.push_back({EntryKind::PolicyText, action.payload, nullptr, {}, {}});
  ctx.tokens_ += turn_tokens(action.payload);
}

std::size_t entry_tokens(const ContextEntry& entry) noexcept { return count_tokens(entry.text); }

ContextView make_view(const Context& ctx, const EpisodeConfig& config) {
  ContextView view;
  view.problem = &ctx.problem();
  view.round = ctx.round();
  view.rounds_remaining = config.max_rounds > ctx.round() ? config.max_rounds - ctx.round() : 0;
  view.budget_remaining = config.token_budget > ctx.token_budget_used() ? config.token_budget - ctx.token_budget_used() : 0;
  view.final_turn = view.rounds_remaining == 0;

  const auto& all = ctx.entries();
  std::vector<bool> keep(all.size(), true);
  std::size_t total = count_tokens(ctx.problem().question);
  for (const auto& e : all) total += entry_tokens(e);

  std::size_t newest_figure = all.size();
  for (std::size_t i = all.size(); i-- > 0;)
    if (all[i].kind == EntryKind::FigureRef) {
      newest_figure = i;
      break;
    }
  auto drop = [&](auto pred) {
    for (std::size_t i = 0; i < all.size() && total > config.token_budget; ++i)
      if (keep[i] && i != newest_figure && pred(all[i])) {
        keep[i] = false;
        total -= entry_tokens(all[i]);
      }
  };
  drop([](const ContextEntry& e) { return e.kind == EntryKind::InterpreterText; });
  drop([](const ContextEntry& e) { return e.kind == EntryKind::FigureRef; });
  drop([](const ContextEntry&) { return true; });

  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) view.entries.push_back(all[i]);
  return view;
}

}  // namespace figr::rollout
