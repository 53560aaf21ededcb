// SPDX-License-Identifier: Apache-2.0
#include "figr/grpo/experiment.hpp"

#include "figr/evalbench/evaluate.hpp"
#include "figr/evalbench/synthetic.hpp"
#include "figr/util/rng.hpp"

namespace figr::grpo {

std::vector<evalbench::ProblemRecord> arm_dataset(std::uint64_t seed) {
  using evalbench::Category;
  std::vector<evalbench::ProblemRecord> out;
  auto add = [&](Category c, std::size_t n) {
    auto part = evalbench::generate_synthetic(c, n, seed);
    out.insert(out.end(), part.begin(), part.end());
  };
  add(Category::SegmentCrossings, 7);
  add(Category::CircleLineHits, 7);
  add(Category::PolygonLatticePoints, 6);
  add(Category::ArithmeticNoFigure, 20);
  return out;
}

ArmTrialResult arm_trial(const std::vector<evalbench::ProblemRecord>& dataset, std::uint64_t seed, bool arm,
                         TrainConfig base, std::size_t eval_k) {
  base.seed = seed;
  if (!arm) base.weights.vis = 0.0;
  const auto trained = train(dataset, base);

  evalbench::EvalConfig ec;
  ec.k = eval_k;
  ec.episode = base.episode;
  ec.rule = base.rule;
  ec.seed = derive_seed(seed, 0xE7A1u);
  ec.workers = base.workers;
  const auto report = evalbench::evaluate(dataset, ToyPolicyHandle(trained.policy), ec);

  ArmTrialResult r;
  r.seed = seed;
  r.arm = arm;
  r.accuracy = report.pass_at_1;
  std::size_t n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < report.problem_ids.size(); ++i) {
    if (report.suitability[i] == 1) {
      r.code_ratio_s1 += report.per_problem_code_ratio[i];
      ++n1;
    } else {
      r.code_ratio_s0 += report.per_problem_code_ratio[i];
      ++n0;
    }
  }
  if (n1) r.code_ratio_s1 /= static_cast<double>(n1);
  if (n0) r.code_ratio_s0 /= static_cast<double>(n0);
  return r;
}

}  // namespace figr::grpo
