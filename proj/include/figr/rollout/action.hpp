// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace figr::rollout {

inline constexpr std::string_view kEndSentinel = "<End>";
inline constexpr std::string_view kFence = "```";

enum class ActionKind { Text, Code, End };

std::string_view to_string(ActionKind kind) noexcept;

/// One discrete decision of a trainable policy: the featurized state it was
/// taken in, the chosen macro-token and its log-probability at sampling time.
struct MacroToken {
  std::uint32_t state = 0;
  std::uint32_t token = 0;
  double logprob = 0.0;
  friend bool operator==(const MacroToken&, const MacroToken&) = default;
};

struct Action {
  ActionKind kind = ActionKind::Text;
  std::string payload;
  std::string code;  // body of the fenced block when kind == Code
  std::vector<MacroToken> logprob_trace;
  friend bool operator==(const Action&, const Action&) = default;
};

/// Code if the payload holds exactly one fenced block (even alongside the end
/// sentinel), End if it holds the end sentinel, Text otherwise.
/// Throws MalformedAction for more than one block or an unterminated fence,
/// InvalidArgument for an empty payload.
Action classify_action(std::string_view payload, std::string_view end_sentinel = kEndSentinel);

/// Contents of the last well-formed "<answer>...</answer>" span, trimmed.
std::optional<std::string> extract_answer_span(std::string_view payload);

}  // namespace figr::rollout
