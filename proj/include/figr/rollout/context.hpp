// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "figr/evalbench/problem.hpp"
#include "figr/figscript/interpreter.hpp"
#include "figr/rollout/action.hpp"

namespace figr::rollout {

enum class EntryKind { PolicyText, PolicyCode, InterpreterText, FigureRef };

std::string_view to_string(EntryKind kind) noexcept;

struct ContextEntry {
  EntryKind kind = EntryKind::PolicyText;
  std::string text;  // payload, feedback, or the ASCII summary for figures
  std::shared_ptr<const figscript::Raster> figure;
  std::string figure_sha256;  // of the PGM bytes
  std::string figure_path;    // relative path once written to disk
};

struct EpisodeConfig {
  std::size_t max_rounds = 3;
  std::size_t token_budget = 32768;
  std::string end_sentinel = std::string(kEndSentinel);
  std::size_t max_turns = 64;
  figscript::ExecLimits exec_limits;

  void validate() const;
};

class Context {
 public:
  explicit Context(const evalbench::ProblemRecord& problem) : problem_(&problem) {}

  const evalbench::ProblemRecord& problem() const noexcept { return *problem_; }
  const std::vector<ContextEntry>& entries() const noexcept { return entries_; }
  std::size_t round() const noexcept { return round_; }
  std::size_t token_budget_used() const noexcept { return tokens_; }
  bool finished() const noexcept { return finished_; }

  /// Canonical SHA-256 over problem, entries (figures by content hash) and round.
  std::string hash() const;

 private:
  friend std::optional<figscript::ExecOutcome> step(Context&, const Action&, const EpisodeConfig&);
  friend void append_truncated(Context&, const Action&);

  const evalbench::ProblemRecord* problem_;
  std::vector<ContextEntry> entries_;
  std::size_t round_ = 0;
  std::size_t tokens_ = 0;
  bool finished_ = false;
};

/// Applies one action. Text appends the payload; Code runs the fenced block and
/// appends code, interpreter text and (when a raster was produced) the figure,
/// then advances the round; End appends the payload and freezes the context.
/// Throws RoundLimitExceeded for Code at round == max_rounds, EpisodeFinished
/// after End.
std::optional<figscript::ExecOutcome> step(Context& context, const Action& action, const EpisodeConfig& config);

/// Records a Code action that arrived on the forced final turn as text.
void append_truncated(Context& context, const Action& action);

/// What a policy sees at a turn. Oldest interpreter text is dropped first,
/// then older figures, then older policy entries, until the problem plus
/// entries fit in the remaining budget; the newest figure is always kept.
struct ContextView {
  const evalbench::ProblemRecord* problem = nullptr;
  std::vector<ContextEntry> entries;
  std::size_t round = 0;
  std::size_t rounds_remaining = 0;
  std::size_t budget_remaining = 0;
  bool final_turn = false;  // rounds exhausted; code will not run
};

ContextView make_view(const Context& context, const EpisodeConfig& config);

/// Token weight of an entry under the whitespace rule.
std::size_t entry_tokens(const ContextEntry& entry) noexcept;

}  // namespace figr::rollout
