// SPDX-License-Identifier: Apache-2.0
#include "figr/evalbench/strategies.hpp"

#include <cctype>

#include "figr/evalbench/synthetic.hpp"
#include "figr/util/text.hpp"

namespace figr::evalbench {

std::optional<std::string> read_feedback_value(std::string_view feedback) {
  std::optional<std::string> last;
  for (auto line : split_lines(feedback)) {
    line = trim(line);
    const auto eq = line.find(" = ");
    if (eq == std::string_view::npos) continue;
    const auto name = line.substr(0, eq);
    const auto value = trim(line.substr(eq + 3));
    if (name == "ans") return std::string(value);
    if (!value.empty() && (std::isdigit(static_cast<unsigned char>(value[0])) || value[0] == '-'))
      last = std::string(value);
  }
  return last;
}

std::optional<std::string> latest_feedback(const rollout::ContextView& view) {
  for (auto it = view.entries.rbegin(); it != view.entries.rend(); ++it)
    if (it->kind == rollout::EntryKind::InterpreterText) return it->text;
  return std::nullopt;
}

namespace {

class ConstructSession final : public rollout::PolicySession {
 public:
  explicit ConstructSession(const ProblemRecord& p) : scene_(parse_question(p.question)) {}

  rollout::PolicyReply act(const rollout::ContextView& view) override {
    if (view.round == 0 && !view.final_turn && scene_)
      return {"I will draw the configuration and measure it.\n```figscript\n" + build_construction(*scene_) + "\n```",
              {}};
    const auto fb = latest_feedback(view);
    const auto value = fb ? read_feedback_value(*fb) : std::nullopt;
    return {"Reading the interpreter output for the construction.\n<answer>" + value.value_or("0") + "</answer> <End>",
            {}};
  }

 private:
  std::optional<Scene> scene_;
};

}  // namespace

std::unique_ptr<rollout::PolicySession> ConstructThenAnswerPolicy::open(const ProblemRecord& problem,
                                                                        std::uint64_t) const {
  return std::make_unique<ConstructSession>(problem);
}

}  // namespace figr::evalbench
