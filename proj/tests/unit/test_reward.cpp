// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "figr/reward/reward.hpp"
#include "figr/rollout/scripted.hpp"
#include "figr/util/error.hpp"

using namespace figr::reward;
using figr::evalbench::ProblemRecord;
using figr::rollout::ScriptedPolicy;

namespace {

ProblemRecord problem(std::optional<int> s) {
  return {"q", "Compute 2 + 1.", "3", s, "arithmetic_no_figure", figr::evalbench::ProblemSource::Synthetic};
}

figr::rollout::Trajectory run(const std::vector<std::string>& script, std::optional<int> s = 1) {
  return figr::rollout::run_episode(problem(s), ScriptedPolicy(script), {}, 0);
}

const std::string kGood = "```figscript\nd = distance((0,0),(3,0))\n```";
const std::string kBad = "```figscript\ncircle(0,0,-1)\n```";

}  // namespace

TEST_CASE("accuracy_reward") {
  CHECK(accuracy_reward("42", "42") == 1);
  CHECK(accuracy_reward(std::nullopt, "42") == 0);
  CHECK(accuracy_reward("1/2", "0.5") == 1);
  CHECK(accuracy_reward(" - 3 ", "-3") == 1);
  CHECK(accuracy_reward("3.0000001", "3") == 1);
  CHECK(accuracy_reward("3.001", "3") == 0);
  CHECK(accuracy_reward("Yes", "yes") == 1);
  CHECK(accuracy_reward("1/0", "inf") == 0);
  CHECK(accuracy_reward("1/2", "0.5", {MatchMode::Exact, 0}) == 0);
  CHECK(accuracy_reward(" 42 ", "42", {MatchMode::Exact, 0}) == 1);
  CHECK_THROWS_AS(accuracy_reward("1", "1", {MatchMode::NormalizedNumeric, -1}), figr::Error);
  CHECK(parse_numeric("7/4") == 1.75);
  CHECK_FALSE(parse_numeric("0x10"));
  CHECK_FALSE(parse_numeric("nan"));
  CHECK_FALSE(parse_numeric("1/2/3"));
}

TEST_CASE("format_reward") {
  CHECK(format_reward("reasoning… <answer>3</answer>") == 1);
  CHECK(format_reward("<answer>3</answer>") == 0);
  CHECK(format_reward("  \n<answer>3</answer> <End>") == 0);
  CHECK(format_reward("no span") == 0);
  CHECK(format_reward("x <answer></answer>") == 0);
}

TEST_CASE("visual_reward reproduces the piecewise table on every combination") {
  for (int correct = 0; correct < 2; ++correct)
    for (int s = 0; s < 2; ++s)
      for (int exec = 0; exec < 2; ++exec)
        for (int invoked = 0; invoked < 2; ++invoked) {
          double expected = 0.0;
          if (correct && exec && invoked) expected = s ? 1.0 : 0.2;
          CHECK(visual_reward(correct, s, exec, invoked) == expected);
        }
  CHECK(visual_reward(true, 1, true, true) == 1.0);
  CHECK(visual_reward(true, 0, true, true) == 0.2);
  CHECK(visual_reward(false, 1, true, true) == 0.0);
}

TEST_CASE("total_reward examples") {
  const auto full = total_reward(run({kGood, "Adding: <answer>3</answer> <End>"}), problem(1));
  CHECK(full.total == 3.0);
  CHECK(full.exec_ok);

  const auto nocode = total_reward(run({"Adding: <answer>3</answer> <End>"}), problem(1));
  CHECK(nocode.total == 2.0);
  CHECK(nocode.r_vis == 0.0);
  CHECK_FALSE(nocode.exec_ok);

  const auto wrong = total_reward(run({kGood, "Adding: <answer>4</answer> <End>"}), problem(1));
  CHECK(wrong.total == 1.0);

  const auto mixed = total_reward(run({kGood, kBad, "Adding: <answer>3</answer> <End>"}), problem(1));
  CHECK_FALSE(mixed.exec_ok);
  CHECK(mixed.total == 2.0);

  const auto unsuitable = total_reward(run({kGood, "Adding: <answer>3</answer> <End>"}, 0), problem(0));
  CHECK(unsuitable.total == doctest::Approx(2.2));

  const auto ablated = total_reward(run({kGood, "Adding: <answer>3</answer> <End>"}), problem(1), {},
                                    RewardWeights::without_visual());
  CHECK(ablated.total == 2.0);
  CHECK(ablated.r_vis == 1.0);
}

TEST_CASE("missing suitability tag") {
  try {
    total_reward(run({"<answer>3</answer> <End>"}, std::nullopt), problem(std::nullopt));
    FAIL("expected MissingSuitabilityTag");
  } catch (const figr::Error& e) {
    CHECK(e.code() == figr::Errc::MissingSuitabilityTag);
  }
}

TEST_CASE("reward is bounded and monotone in correctness") {
  const std::vector<std::vector<std::string>> scripts = {
      {"<answer>3</answer> <End>"},           {"why <answer>3</answer> <End>"},
      {kGood, "so <answer>3</answer> <End>"}, {kBad, "so <answer>3</answer> <End>"},
      {kGood, "<answer>9</answer> <End>"},    {"silence <End>"}};
  for (int s = 0; s < 2; ++s)
    for (const auto& script : scripts) {
      const auto b = total_reward(run(script, s), problem(s));
      CHECK(b.total >= 0.0);
      CHECK(b.total <= 3.0);
      CHECK((b.r_vis == 0.0 || (b.answer_correct && b.exec_ok)));
      // Same behaviour with the answer flipped to correct never scores lower.
      const double flipped = b.r_acc == 1 ? b.total
                                          : 1.0 + b.r_fmt + visual_reward(true, s, b.exec_ok,
                                                                          figr::rollout::count_behavior(run(script, s)).code_blocks > 0);
      CHECK(flipped >= b.total);
    }
}
