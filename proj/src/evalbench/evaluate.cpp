// SPDX-License-Identifier: Apache-2.0
#include "figr/evalbench/evaluate.hpp"

#include <fmt/format.h>

#include "figr/util/error.hpp"
#include "figr/util/parallel.hpp"
#include "figr/util/rng.hpp"

namespace figr::evalbench {

EvalReport evaluate(const std::vector<ProblemRecord>& dataset, const rollout::PolicyHandle& policy,
                    const EvalConfig& config, std::vector<rollout::Trajectory>* trajectories) {
  if (config.k < 1) throw Error(Errc::InvalidArgument, "k must be at least 1");
  if (dataset.empty()) throw Error(Errc::EmptyList, "dataset is empty");
  config.episode.validate();

  const std::size_t k = config.k, cells = dataset.size() * k;
  std::vector<rollout::Trajectory> runs(cells);
  std::vector<char> correct(cells, 0);
  std::vector<std::string> errors(cells);

  parallel_for(cells, config.workers, [&](std::size_t cell) {
    const std::size_t pi = cell / k, si = cell % k;
    const auto& problem = dataset[pi];
    try {
      auto t = rollout::run_episode(problem, policy, config.episode, derive_seed(config.seed, pi, si));
      if (problem.suitability) t.reward = reward::total_reward(t, problem, config.rule);
      const auto& ans = t.final_answer;
      correct[cell] = static_cast<char>(reward::accuracy_reward(
          ans ? std::optional<std::string_view>(*ans) : std::nullopt, problem.gold_answer, config.rule));
      runs[cell] = std::move(t);
    } catch (const Error& e) {
      errors[cell] = e.what();
      runs[cell].problem = problem;
    }
  });

  EvalReport r;
  std::map<std::string, std::pair<double, std::size_t>> by_cat;
  double sum = 0.0;
  for (std::size_t pi = 0; pi < dataset.size(); ++pi) {
    const auto& p = dataset[pi];
    r.problem_ids.push_back(p.id);
    r.suitability.push_back(p.suitability ? *p.suitability : -1);
    std::vector<bool> row(k);
    std::vector<std::string> err(k);
    std::size_t with_code = 0;
    for (std::size_t si = 0; si < k; ++si) {
      row[si] = correct[pi * k + si] != 0;
      err[si] = errors[pi * k + si];
      with_code += runs[pi * k + si].behavior.code_blocks > 0;
    }
    const double p1 = pass_at_1(row);
    r.per_problem_pass_at_1.push_back(p1);
    r.per_problem_code_ratio.push_back(static_cast<double>(with_code) / static_cast<double>(k));
    r.correctness.push_back(std::move(row));
    r.errors.push_back(std::move(err));
    sum += p1;
    auto& c = by_cat[p.category];
    c.first += p1;
    ++c.second;
  }
  r.pass_at_1 = sum / static_cast<double>(dataset.size());
  for (const auto& [cat, acc] : by_cat) r.pass_at_1_by_category[cat] = acc.first / static_cast<double>(acc.second);
  r.behavior = behavior_metrics(runs);
  if (trajectories) *trajectories = std::move(runs);
  return r;
}

nlohmann::json report_to_json(const EvalReport& r) {
  using nlohmann::json;
  json problems = json::array();
  for (std::size_t i = 0; i < r.problem_ids.size(); ++i) {
    json errs = json::array();
    for (const auto& e : r.errors[i]) errs.push_back(e.empty() ? json(nullptr) : json(e));
    problems.push_back({{"id", r.problem_ids[i]},
                        {"s", r.suitability[i] < 0 ? json(nullptr) : json(r.suitability[i])},
                        {"correct", r.correctness[i]},
                        {"errors", errs},
                        {"pass_at_1", r.per_problem_pass_at_1[i]},
                        {"code_ratio", r.per_problem_code_ratio[i]}});
  }
  const auto& b = r.behavior;
  return {{"pass_at_1", r.pass_at_1},
          {"pass_at_1_by_category", r.pass_at_1_by_category},
          {"behavior",
           {{"trajectories", b.trajectories},
            {"mean_response_tokens", b.mean_response_tokens},
            {"code_count", b.code_count},
            {"code_ratio", b.code_ratio},
            {"mean_code_lines", b.mean_code_lines},
            {"code_pass_rate", b.code_pass_rate ? json(*b.code_pass_rate) : json(nullptr)}}},
          {"problems", problems}};
}

std::string report_to_csv(const EvalReport& r) {
  std::string out = "problem_id,s,pass_at_1,code_ratio\n";
  for (std::size_t i = 0; i < r.problem_ids.size(); ++i)
    out += fmt::format("{},{},{},{}\n", r.problem_ids[i], r.suitability[i] < 0 ? "" : std::to_string(r.suitability[i]),
                       r.per_problem_pass_at_1[i], r.per_problem_code_ratio[i]);
  out += fmt::format("ALL,,{},{}\n", r.pass_at_1, r.behavior.code_ratio);
  return out;
}

}  // namespace figr::evalbench
