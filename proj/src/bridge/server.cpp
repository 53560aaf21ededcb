// SPDX-License-Identifier: Apache-2.0
#include "figr/bridge/server.hpp"

#include <atomic>
#include <map>
#include <thread>

#include <spdlog/spdlog.h>

#include "figr/util/error.hpp"

namespace figr::bridge {

using nlohmann::json;

std::optional<std::pair<std::size_t, EpisodeJob>> WorkQueue::pop() {
  std::lock_guard lock(mu_);
  if (next_ >= jobs_.size()) return std::nullopt;
  const auto i = next_++;
  return std::pair{i, jobs_[i]};
}

bool WorkQueue::drained() const {
  std::lock_guard lock(mu_);
  return next_ >= jobs_.size();
}

namespace {

// Channel wrapper that logs every frame into the transcript.
class Link {
 public:
  Link(FdChannel& ch, Transcript& t, std::chrono::milliseconds timeout) : ch_(ch), t_(t), timeout_(timeout) {}

  void send(json frame) {
    ch_.send(frame);
    t_.frames.push_back({true, std::move(frame)});
  }

  json receive() {
    auto j = ch_.receive(timeout_);
    t_.frames.push_back({false, j});
    return j;
  }

 private:
  FdChannel& ch_;
  Transcript& t_;
  std::chrono::milliseconds timeout_;
};

void expect_type(const json& j, std::string_view type, const std::string& session_id) {
  const auto it = j.find("type");
  if (it == j.end() || !it->is_string() || *it != type)
    throw Error(Errc::ProtocolError, "expected a \"" + std::string(type) + "\" frame, got " +
                                         (it == j.end() ? std::string("no type") : it->dump()));
  const auto sid = j.find("session_id");
  if (sid == j.end() || !sid->is_string() || *sid != session_id)
    throw Error(Errc::ProtocolError, "frame does not echo session_id \"" + session_id + "\"");
}

class WireSession final : public rollout::PolicySession {
 public:
  WireSession(Link& link, const std::string& sid, std::uint64_t seed) : link_(link), sid_(sid), seed_(seed) {}

  rollout::PolicyReply act(const rollout::ContextView& view) override {
    link_.send(act_frame(sid_, view, seed_));
    const auto reply = link_.receive();
    expect_type(reply, "act_response", sid_);
    const auto p = reply.find("payload");
    if (p == reply.end()) throw Error(Errc::ProtocolError, "act_response lacks \"payload\"");
    if (!p->is_string()) throw Error(Errc::ProtocolError, "\"payload\" must be a string");
    if (p->get_ref<const std::string&>().empty()) throw Error(Errc::ProtocolError, "\"payload\" is empty");
    return {p->get<std::string>(), {}};
  }

 private:
  Link& link_;
  const std::string& sid_;
  std::uint64_t seed_;
};

class WireHandle final : public rollout::PolicyHandle {
 public:
  WireHandle(Link& link, const std::string& sid) : link_(link), sid_(sid) {}
  std::unique_ptr<rollout::PolicySession> open(const evalbench::ProblemRecord&, std::uint64_t seed) const override {
    return std::make_unique<WireSession>(link_, sid_, seed);
  }

 private:
  Link& link_;
  const std::string& sid_;
};

json episode_end_frame(const std::string& sid, const rollout::Trajectory& t, bool correct) {
  json j = {{"type", "episode_end"},
            {"session_id", sid},
            {"episode_id", t.problem.id},
            {"final_answer", t.final_answer ? json(*t.final_answer) : json(nullptr)},
            {"correct", correct},
            {"turns", t.turns.size()},
            {"notes", t.notes},
            {"context_hash", t.context_hash}};
  j["reward"] = t.reward ? json(t.reward->total) : json(nullptr);
  return j;
}

}  // namespace

SessionResult serve_session(FdChannel& channel, WorkQueue& queue, const ServeConfig& config,
                            const std::string& session_id) {
  SessionResult res;
  res.transcript.session_id = session_id;
  Link link(channel, res.transcript, config.act_timeout);
  std::string_view code = "ProtocolError";
  try {
    const auto hello = link.receive();
    const auto proto = hello.find("proto");
    if (proto == hello.end() || !proto->is_string() || *proto != kProtocolVersion) {
      code = "HandshakeMismatch";
      throw Error(Errc::HandshakeMismatch, std::string("expected proto \"") + kProtocolVersion + "\", got " +
                                               (proto == hello.end() ? std::string("none") : proto->dump()));
    }
    link.send({{"proto", kProtocolVersion},
               {"ok", true},
               {"session_id", session_id},
               {"config", config_to_json(config.episode)}});
    const WireHandle handle(link, session_id);
    for (;;) {
      expect_type(link.receive(), "ready", session_id);
      auto next = queue.pop();
      if (!next) {
        link.send({{"type", "bye"}, {"session_id", session_id}, {"episodes", res.episodes.size()}});
        break;
      }
      res.failed_job = next->first;
      const auto& job = next->second;
      auto t = rollout::run_episode(job.problem, handle, config.episode, job.seed);
      bool correct = reward::accuracy_reward(t.final_answer, job.problem.gold_answer, config.rule) == 1;
      if (job.problem.suitability) t.reward = reward::total_reward(t, job.problem, config.rule, config.weights);
      link.send(episode_end_frame(session_id, t, correct));
      res.failed_job.reset();
      res.episodes.push_back({next->first, std::move(t)});
    }
  } catch (const Error& e) {
    if (e.code() == Errc::HandshakeMismatch || e.code() == Errc::FrameTooLarge || e.code() == Errc::Timeout)
      code = to_string(e.code());
    res.error = e.what();
    spdlog::warn("session {} closed: {}", session_id, e.what());
    // The peer may already be gone; the error frame is best effort.
    try {
      link.send(error_frame(session_id, code, e.what()));
    } catch (const Error&) {
    }
  }
  channel.shutdown_write();
  return res;
}

std::vector<SessionResult> serve_tcp(TcpListener& listener, WorkQueue& queue, const ServeConfig& config) {
  std::mutex mu;
  std::map<std::size_t, SessionResult> results;
  std::vector<std::thread> threads;
  std::atomic<std::size_t> active{0};
  std::size_t next_id = 0;
  while (!(queue.drained() && active.load() == 0)) {
    const auto fd = listener.accept(std::chrono::milliseconds(100));
    if (!fd) continue;
    const std::size_t id = next_id++;
    ++active;
    threads.emplace_back([&, id, fd = *fd] {
      FdChannel ch(fd, fd, true);
      auto r = serve_session(ch, queue, config, "s" + std::to_string(id));
      {
        std::lock_guard lock(mu);
        results.emplace(id, std::move(r));
      }
      --active;
    });
  }
  // Connections already queued in the backlog still get a clean bye.
  while (const auto fd = listener.accept(std::chrono::milliseconds(0))) {
    const std::size_t id = next_id++;
    FdChannel ch(*fd, *fd, true);
    results.emplace(id, serve_session(ch, queue, config, "s" + std::to_string(id)));
  }
  for (auto& t : threads) t.join();
  std::vector<SessionResult> out;
  for (auto& [id, r] : results) out.push_back(std::move(r));
  return out;
}

}  // namespace figr::bridge
