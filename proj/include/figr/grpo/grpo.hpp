// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "figr/grpo/toy_policy.hpp"
#include "figr/reward/reward.hpp"
#include "figr/rollout/trajectory.hpp"

namespace figr::grpo {

struct TrainConfig {
  std::size_t group_size = 8;
  double clip = 0.2;
  double kl_coef = 0.01;
  double learning_rate = 0.5;
  std::size_t iterations = 300;
  std::uint64_t seed = 0;
  std::size_t ppo_epochs = 1;
  std::size_t bucket_count = 64;
  double temperature = 0.7;
  unsigned workers = 1;
  rollout::EpisodeConfig episode;
  reward::AnswerMatchRule rule;
  reward::RewardWeights weights;

  void validate() const;
};

struct GroupRollout {
  std::string problem_id;
  std::vector<rollout::Trajectory> trajectories;
  std::vector<double> rewards;
  double baseline = 0.0;
  std::vector<double> advantages;
};

/// Group mean and centred advantages.
std::pair<double, std::vector<double>> group_advantages(std::span<const double> rewards);

GroupRollout sample_group(const evalbench::ProblemRecord& problem, const ToyPolicy& policy, std::size_t group_size,
                          std::uint64_t seed, const TrainConfig& cfg);

/// min(r * a, clip(r, 1 - eps, 1 + eps) * a)
double clipped_term(double ratio, double advantage, double eps) noexcept;

/// Mean over tokens of exp(d) - d - 1 with d = ref - current. Throws LengthMismatch.
double kl_estimate(std::span<const double> logp_current, std::span<const double> logp_ref);

struct SurrogateStats {
  double objective_value = 0.0;
  double mean_clip_fraction = 0.0;
  double mean_kl = 0.0;
  double grad_norm = 0.0;
};

/// Mean over groups of the clipped token-averaged surrogate minus kl_coef
/// times the token-averaged KL, with its analytic gradient in the policy's
/// parameter layout. Throws ShapeMismatch if policies differ in shape or a
/// macro-token falls outside the table.
std::pair<SurrogateStats, std::vector<double>> objective_and_gradient(std::span<const GroupRollout> groups,
                                                                      const ToyPolicy& policy, const ToyPolicy& ref,
                                                                      const TrainConfig& cfg);

struct IterationMetrics {
  std::size_t iteration = 0;
  double mean_reward = 0.0;
  double accuracy = 0.0;
  double code_ratio = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
  double objective = 0.0;
  double grad_norm = 0.0;
};

struct TrainResult {
  ToyPolicy policy;
  ToyPolicy reference;
  std::vector<IterationMetrics> metrics;
};

/// Plain gradient ascent; the old policy is the previous iterate and the
/// reference is the initial one (zero logits unless `initial` is given, in
/// which case its shape and temperature win over cfg). Throws NumericalError
/// on non-finite values.
TrainResult train(const std::vector<evalbench::ProblemRecord>& dataset, const TrainConfig& cfg,
                  const std::function<void(const IterationMetrics&)>& on_iteration = {},
                  const ToyPolicy* initial = nullptr);

void write_metrics_csv(std::ostream& out, std::span<const IterationMetrics> metrics);

/// "FIGRCKPT", u32 version, u32 buckets, u32 templates, then row-major
/// little-endian doubles. Temperature is not stored.
void save_checkpoint(const std::filesystem::path& path, const ToyPolicy& policy);
ToyPolicy load_checkpoint(const std::filesystem::path& path, double temperature = 0.7);

}  // namespace figr::grpo
