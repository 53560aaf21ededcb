// SPDX-License-Identifier: Apache-2.0
#include "figr/rollout/scripted.hpp"

namespace figr::rollout {
namespace {

class ListSession final : public PolicySession {
 public:
  explicit ListSession(const std::vector<std::string>& payloads) : payloads_(payloads) {}
  PolicyReply act(const ContextView&) override {
    if (next_ < payloads_.size()) return {payloads_[next_++], {}};
    return {std::string(kEndSentinel), {}};
  }

 private:
  const std::vector<std::string>& payloads_;
  std::size_t next_ = 0;
};

class ConstantSession final : public PolicySession {
 public:
  explicit ConstantSession(std::string payload) : payload_(std::move(payload)) {}
  PolicyReply act(const ContextView&) override { return {payload_, {}}; }

 private:
  std::string payload_;
};

}  // namespace

std::unique_ptr<PolicySession> ScriptedPolicy::open(const evalbench::ProblemRecord&, std::uint64_t) const {
  return std::make_unique<ListSession>(payloads_);
}

std::unique_ptr<PolicySession> OraclePolicy::open(const evalbench::ProblemRecord& problem, std::uint64_t) const {
  return std::make_unique<ConstantSession>("The reference solution gives this value.\n<answer>" + problem.gold_answer +
                                           "</answer> <End>");
}

std::unique_ptr<PolicySession> SilentPolicy::open(const evalbench::ProblemRecord&, std::uint64_t) const {
  return std::make_unique<ConstantSession>("I cannot settle this one. <End>");
}

}  // namespace figr::rollout
