// SPDX-License-Identifier: Apache-2.0
#include "figr/grpo/grpo.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "figr/kernels/kernels.hpp"
#include "figr/util/error.hpp"
#include "figr/util/parallel.hpp"
#include "figr/util/rng.hpp"

namespace figr::grpo {

void TrainConfig::validate() const {
  if (group_size < 2) throw Error(Errc::InvalidArgument, "group_size must be at least 2");
  if (!(clip > 0.0 && clip < 1.0)) throw Error(Errc::InvalidArgument, "clip must lie in (0, 1)");
  if (!(kl_coef >= 0.0)) throw Error(Errc::InvalidArgument, "kl_coef must be non-negative");
  if (!std::isfinite(learning_rate)) throw Error(Errc::InvalidArgument, "learning_rate must be finite");
  if (ppo_epochs < 1) throw Error(Errc::InvalidArgument, "ppo_epochs must be at least 1");
  if (bucket_count < 1) throw Error(Errc::InvalidArgument, "bucket_count must be at least 1");
  if (!(temperature > 0.0)) throw Error(Errc::InvalidArgument, "temperature must be positive");
  episode.validate();
}

std::pair<double, std::vector<double>> group_advantages(std::span<const double> rewards) {
  if (rewards.empty()) throw Error(Errc::EmptyList, "group has no rewards");
  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double n = static_cast<double>(rewards.size());
  double mean = sum / n;
  double residual = 0.0;
  for (double r : rewards) residual += r - mean;
  mean += residual / n;  // exact for constant groups
  std::vector<double> adv(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = rewards[i] - mean;
  return {mean, adv};
}

GroupRollout sample_group(const evalbench::ProblemRecord& problem, const ToyPolicy& policy, std::size_t group_size,
                          std::uint64_t seed, const TrainConfig& cfg) {
  if (group_size < 2) throw Error(Errc::InvalidArgument, "group_size must be at least 2");
  const ToyPolicyHandle handle(policy);
  GroupRollout g;
  g.problem_id = problem.id;
  g.trajectories.reserve(group_size);
  for (std::size_t i = 0; i < group_size; ++i) {
    auto t = rollout::run_episode(problem, handle, cfg.episode, derive_seed(seed, i));
    t.reward = reward::total_reward(t, problem, cfg.rule, cfg.weights);
    g.rewards.push_back(t.reward->total);
    g.trajectories.push_back(std::move(t));
  }
  std::tie(g.baseline, g.advantages) = group_advantages(g.rewards);
  return g;
}

double clipped_term(double ratio, double advantage, double eps) noexcept {
  const double lo = 1.0 - eps, hi = 1.0 + eps;
  const double c = ratio > lo ? (ratio < hi ? ratio : hi) : lo;
  const double u = ratio * advantage, v = c * advantage;
  return u < v ? u : v;
}

double kl_estimate(std::span<const double> cur, std::span<const double> ref) {
  if (cur.size() != ref.size())
    throw Error(Errc::LengthMismatch,
                fmt::format("trace lengths differ: {} current vs {} reference", cur.size(), ref.size()));
  if (cur.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    const double d = ref[i] - cur[i];
    sum += std::expm1(d) - d;
  }
  return sum / static_cast<double>(cur.size());
}

std::pair<SurrogateStats, std::vector<double>> objective_and_gradient(std::span<const GroupRollout> groups,
                                                                      const ToyPolicy& policy, const ToyPolicy& ref,
                                                                      const TrainConfig& cfg) {
  if (!policy.same_shape(ref))
    throw Error(Errc::ShapeMismatch, fmt::format("policy is {}x{}, reference is {}x{}", policy.bucket_count,
                                                 policy.template_count, ref.bucket_count, ref.template_count));
  if (groups.empty()) throw Error(Errc::EmptyList, "no groups");
  const double eps = cfg.clip, beta = cfg.kl_coef, T = policy.temperature;
  std::vector<double> grad(policy.params.size(), 0.0);
  SurrogateStats stats;
  std::size_t tokens_seen = 0, clipped = 0;

  // Per-bucket probabilities are reused across tokens.
  std::vector<std::vector<double>> probs(policy.bucket_count);
  auto probs_for = [&](std::size_t b) -> const std::vector<double>& {
    if (probs[b].empty()) probs[b] = policy.probabilities(b);
    return probs[b];
  };

  std::vector<double> ratio, adv, terms;
  for (const auto& g : groups) {
    const std::size_t G = g.trajectories.size();
    if (G == 0 || g.advantages.size() != G) throw Error(Errc::ShapeMismatch, "group advantages do not match trajectories");
    double pol = 0.0, kl = 0.0;
    for (std::size_t i = 0; i < G; ++i) {
      const auto trace = g.trajectories[i].macro_tokens();
      if (trace.empty()) continue;
      const double w = 1.0 / (static_cast<double>(G) * static_cast<double>(trace.size()));
      ratio.resize(trace.size());
      adv.assign(trace.size(), g.advantages[i]);
      terms.resize(trace.size());
      std::vector<double> cur(trace.size()), refp(trace.size());
      for (std::size_t t = 0; t < trace.size(); ++t) {
        const auto& m = trace[t];
        if (m.state >= policy.bucket_count || m.token >= policy.template_count)
          throw Error(Errc::ShapeMismatch, fmt::format("macro-token ({}, {}) outside the {}x{} table", m.state, m.token,
                                                       policy.bucket_count, policy.template_count));
        cur[t] = policy.logprob(m.state, m.token);
        refp[t] = ref.logprob(m.state, m.token);
        ratio[t] = std::exp(cur[t] - m.logprob);
      }
      kernels::clipped_terms(ratio, adv, eps, terms);
      for (std::size_t t = 0; t < trace.size(); ++t) {
        const auto& m = trace[t];
        const double A = g.advantages[i], r = ratio[t];
        pol += w * terms[t];
        const double d = refp[t] - cur[t];
        kl += w * (std::expm1(d) - d);
        ++tokens_seen;
        clipped += std::fabs(r - 1.0) > eps;
        // Unclipped branch is active for A > 0 below 1 + eps, A < 0 above 1 - eps.
        const bool active = (A > 0.0 && r < 1.0 + eps) || (A < 0.0 && r > 1.0 - eps);
        const double dlogp = w * ((active ? A * r : 0.0) + beta * std::expm1(d));
        if (dlogp == 0.0) continue;
        const auto& p = probs_for(m.state);
        double* row = grad.data() + m.state * policy.template_count;
        for (std::size_t j = 0; j < policy.template_count; ++j)
          row[j] += dlogp * ((j == m.token ? 1.0 : 0.0) - p[j]) / T;
      }
    }
    stats.objective_value += pol - beta * kl;
    stats.mean_kl += kl;
  }
  const double n = static_cast<double>(groups.size());
  stats.objective_value /= n;
  stats.mean_kl /= n;
  for (auto& v : grad) v /= n;
  stats.mean_clip_fraction = tokens_seen ? static_cast<double>(clipped) / static_cast<double>(tokens_seen) : 0.0;
  double sq = 0.0;
  for (double v : grad) sq += v * v;
  stats.grad_norm = std::sqrt(sq);
  return {stats, grad};
}

namespace {

void check_finite(const std::vector<double>& v, std::string_view what, std::size_t iteration) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw Error(Errc::NumericalError,
                  fmt::format("non-finite {} at iteration {}, index {} (bucket {}, template {}): {}", what, iteration,
                              i, i / kTemplateCount, i % kTemplateCount, v[i]));
}

}  // namespace

TrainResult train(const std::vector<evalbench::ProblemRecord>& dataset, const TrainConfig& cfg,
                  const std::function<void(const IterationMetrics&)>& on_iteration, const ToyPolicy* initial) {
  cfg.validate();
  if (dataset.empty()) throw Error(Errc::EmptyList, "training set is empty");
  for (const auto& p : dataset)
    if (!p.suitability) throw Error(Errc::MissingSuitabilityTag, "problem \"" + p.id + "\" has no suitability tag");

  TrainResult res;
  res.policy = initial ? *initial : ToyPolicy(cfg.bucket_count, kTemplateCount, cfg.temperature);
  if (res.policy.template_count != kTemplateCount)
    throw Error(Errc::ShapeMismatch, fmt::format("initial policy has {} templates, expected {}",
                                                 res.policy.template_count, kTemplateCount));
  res.reference = res.policy;
  std::vector<GroupRollout> groups(dataset.size());

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const ToyPolicy old = res.policy;
    parallel_for(dataset.size(), cfg.workers, [&](std::size_t pi) {
      groups[pi] = sample_group(dataset[pi], old, cfg.group_size, derive_seed(cfg.seed, it, pi), cfg);
    });

    IterationMetrics m;
    m.iteration = it;
    std::size_t n = 0;
    for (const auto& g : groups)
      for (const auto& t : g.trajectories) {
        ++n;
        m.mean_reward += t.reward->total;
        m.accuracy += t.reward->r_acc;
        m.code_ratio += t.behavior.code_blocks > 0;
      }
    m.mean_reward /= static_cast<double>(n);
    m.accuracy /= static_cast<double>(n);
    m.code_ratio /= static_cast<double>(n);

    for (std::size_t epoch = 0; epoch < cfg.ppo_epochs; ++epoch) {
      auto [stats, grad] = objective_and_gradient(groups, res.policy, res.reference, cfg);
      check_finite(grad, "gradient", it);
      if (epoch == 0) {
        m.kl = stats.mean_kl;
        m.objective = stats.objective_value;
        m.grad_norm = stats.grad_norm;
      }
      m.clip_fraction = stats.mean_clip_fraction;
      for (std::size_t i = 0; i < grad.size(); ++i) res.policy.params[i] += cfg.learning_rate * grad[i];
      check_finite(res.policy.params, "parameter", it);
    }
    spdlog::debug("iter {} reward {:.4f} acc {:.4f} code {:.4f} kl {:.5f} objective {:.6g} grad_norm {:.6g}", it,
                  m.mean_reward, m.accuracy, m.code_ratio, m.kl, m.objective, m.grad_norm);
    if (on_iteration) on_iteration(m);
    res.metrics.push_back(m);
  }
  return res;
}

void write_metrics_csv(std::ostream& out, std::span<const IterationMetrics> metrics) {
  out << "iteration,mean_reward,accuracy,code_ratio,kl,clip_fraction\n";
  for (const auto& m : metrics)
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", m.iteration, m.mean_reward, m.accuracy,
                       m.code_ratio, m.kl, m.clip_fraction);
}

namespace {

constexpr char kMagic[8] = {'F', 'I', 'G', 'R', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), bytes);
  if (!in) throw Error(Errc::Io, "truncated checkpoint");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ToyPolicy& policy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(policy.bucket_count));
  put_u32(out, static_cast<std::uint32_t>(policy.template_count));
  for (double v : policy.params) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
}

ToyPolicy load_checkpoint(const std::filesystem::path& path, double temperature) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error(Errc::Io, path.string() + " is not a checkpoint");
  const auto version = static_cast<std::uint32_t>(get_le(in, 4));
  if (version != kVersion) throw Error(Errc::Io, fmt::format("unsupported checkpoint version {}", version));
  const auto buckets = static_cast<std::size_t>(get_le(in, 4));
  const auto templates = static_cast<std::size_t>(get_le(in, 4));
  if (buckets == 0 || templates == 0 || buckets * templates > (1u << 24))
    throw Error(Errc::Io, "implausible checkpoint shape");
  ToyPolicy p(buckets, templates, temperature);
  for (auto& v : p.params) v = std::bit_cast<double>(get_le(in, 8));
  if (in.peek() != std::char_traits<char>::eof()) throw Error(Errc::Io, "trailing bytes in checkpoint");
  return p;
}

}  // namespace figr::grpo
