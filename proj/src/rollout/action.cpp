// SPDX-License-Identifier: Apache-2.0
#include "figr/rollout/action.hpp"

#include <vector>

#include "figr/util/error.hpp"
#include "figr/util/text.hpp"

namespace figr::rollout {

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::Text: return "text";
    case ActionKind::Code: return "code";
    case ActionKind::End: return "end";
  }
  return "?";
}

namespace {

std::string fenced_body(std::string_view inner) {
  const auto nl = inner.find('\n');
  if (nl != std::string_view::npos) {
    // First line is the info string ("figscript", "figs" or empty).
    std::string_view body = inner.substr(nl + 1);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    return std::string(body);
  }
  std::string_view body = trim(inner);
  for (std::string_view tag : {"figscript", "figs"}) {
    if (body.size() > tag.size() && body.substr(0, tag.size()) == tag &&
        (body[tag.size()] == ' ' || body[tag.size()] == '\t')) {
      body = trim(body.substr(tag.size()));
      break;
    }
  }
  return std::string(body);
}

}  // namespace

Action classify_action(std::string_view payload, std::string_view end_sentinel) {
  if (trim(payload).empty()) throw Error(Errc::InvalidArgument, "empty payload");
  std::vector<std::size_t> fences;
  for (auto pos = payload.find(kFence); pos != std::string_view::npos; pos = payload.find(kFence, pos + kFence.size()))
    fences.push_back(pos);

  Action a;
  a.payload = std::string(payload);
  if (fences.size() % 2 == 1) throw Error(Errc::MalformedAction, "unterminated code fence");
  if (fences.size() > 2)
    throw Error(Errc::MalformedAction, std::to_string(fences.size() / 2) + " fenced blocks in one action");
  if (fences.size() == 2) {
    const auto open = fences[0] + kFence.size();
    a.kind = ActionKind::Code;
    a.code = fenced_body(payload.substr(open, fences[1] - open));
    return a;
  }
  a.kind = payload.find(end_sentinel) != std::string_view::npos ? ActionKind::End : ActionKind::Text;
  return a;
}

std::optional<std::string> extract_answer_span(std::string_view payload) {
  static constexpr std::string_view kOpen = "<answer>", kClose = "</answer>";
  std::optional<std::string> last;
  std::size_t pos = 0;
  while (true) {
    auto open = payload.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    const auto close = payload.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) break;
    // An inner opening tag restarts the span.
    for (auto inner = payload.find(kOpen, open + kOpen.size()); inner != std::string_view::npos && inner < close;
         inner = payload.find(kOpen, inner + kOpen.size()))
      open = inner;
    const auto content = trim(payload.substr(open + kOpen.size(), close - open - kOpen.size()));
    if (!content.empty()) last = std::string(content);
    pos = close + kClose.size();
  }
  return last;
}

}  // namespace figr::rollout
