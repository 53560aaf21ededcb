// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "figr/evalbench/metrics.hpp"
#include "figr/reward/reward.hpp"
#include "figr/rollout/policy.hpp"

namespace figr::evalbench {

struct EvalConfig {
  std::size_t k = 1;
  rollout::EpisodeConfig episode;
  reward::AnswerMatchRule rule;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct EvalReport {
  std::vector<std::string> problem_ids;
  std::vector<int> suitability;  // -1 when untagged
  std::vector<std::vector<bool>> correctness;  // problems x k
  std::vector<std::vector<std::string>> errors;  // per-cell annotation, empty if none
  std::vector<double> per_problem_pass_at_1;
  std::vector<double> per_problem_code_ratio;
  double pass_at_1 = 0.0;
  std::map<std::string, double> pass_at_1_by_category;
  BehaviorReport behavior;
};

/// k episodes per problem with seeds derived from (seed, problem, sample).
/// Episode failures count as incorrect and are annotated. Trajectories are
/// returned in problem-major order when `trajectories` is non-null.
EvalReport evaluate(const std::vector<ProblemRecord>& dataset, const rollout::PolicyHandle& policy,
                    const EvalConfig& config, std::vector<rollout::Trajectory>* trajectories = nullptr);

nlohmann::json report_to_json(const EvalReport& report);
/// problem_id,s,pass_at_1,code_ratio rows followed by an "ALL" summary row.
std::string report_to_csv(const EvalReport& report);

}  // namespace figr::evalbench
