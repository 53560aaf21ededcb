// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "figr/evalbench/problem.hpp"
#include "figr/rollout/policy.hpp"

namespace figr::grpo {

/// Macro-actions available to the toy policy at every turn.
enum class Template : std::uint32_t { Construct, AnswerReasoned, AnswerFromFigure, AnswerBare, EndSilent };

inline constexpr std::size_t kTemplateCount = 5;

std::string_view to_string(Template t) noexcept;

/// Softmax policy over templates with one logit row per feature bucket.
struct ToyPolicy {
  std::size_t bucket_count = 64;
  std::size_t template_count = kTemplateCount;
  double temperature = 0.7;
  std::vector<double> params;  // bucket-major logits

  ToyPolicy() : params(bucket_count * template_count, 0.0) {}
  ToyPolicy(std::size_t buckets, std::size_t templates, double temp)
      : bucket_count(buckets), template_count(templates), temperature(temp), params(buckets * templates, 0.0) {}

  std::span<const double> row(std::size_t bucket) const {
    return std::span(params).subspan(bucket * template_count, template_count);
  }
  std::vector<double> probabilities(std::size_t bucket) const;
  double logprob(std::size_t bucket, std::size_t token) const;
  bool same_shape(const ToyPolicy& other) const noexcept {
    return bucket_count == other.bucket_count && template_count == other.template_count &&
           params.size() == other.params.size();
  }
};

/// Stable hash of (category, round, last exec_ok, figure present).
std::uint32_t featurize(std::string_view category, std::size_t round, bool last_exec_ok, bool figure_present,
                        std::size_t bucket_count) noexcept;
std::uint32_t featurize(const rollout::ContextView& view, std::size_t bucket_count);

/// Answer a text-only solver would give from the problem statement alone.
/// Exact for arithmetic, a quick heuristic for geometry.
std::string mental_estimate(const evalbench::ProblemRecord& problem);

/// Payload produced by a template in the given view.
std::string render_template(Template t, const evalbench::ProblemRecord& problem, const rollout::ContextView& view);

/// Samples templates from a fixed policy snapshot; the snapshot must outlive
/// the handle and its sessions.
class ToyPolicyHandle final : public rollout::PolicyHandle {
 public:
  explicit ToyPolicyHandle(const ToyPolicy& policy) : policy_(policy) {}
  std::unique_ptr<rollout::PolicySession> open(const evalbench::ProblemRecord& problem,
                                               std::uint64_t seed) const override;

 private:
  const ToyPolicy& policy_;
};

}  // namespace figr::grpo
