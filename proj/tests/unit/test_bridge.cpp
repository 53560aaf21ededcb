// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/socket.h>
#include <unistd.h>

#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "figr/bridge/client.hpp"
#include "figr/bridge/server.hpp"
#include "figr/evalbench/strategies.hpp"
#include "figr/evalbench/synthetic.hpp"
#include "figr/figscript/raster.hpp"
#include "figr/grpo/toy_policy.hpp"
#include "figr/rollout/scripted.hpp"
#include "figr/util/error.hpp"
#include "figr/util/rng.hpp"

using namespace figr::bridge;
using figr::Errc;
using figr::Error;
using figr::evalbench::Category;
using nlohmann::json;

namespace {

std::vector<EpisodeJob> jobs_for(Category cat, std::size_t n, std::uint64_t seed = 1) {
  std::vector<EpisodeJob> jobs;
  for (const auto& p : figr::evalbench::generate_synthetic(cat, n, seed))
    jobs.push_back({p, figr::derive_seed(seed, jobs.size())});
  return jobs;
}

// Server session on one end of a socket pair, running in the background.
struct Harness {
  WorkQueue queue;
  ServeConfig config;
  int client_fd = -1;
  std::unique_ptr<FdChannel> client;
  std::future<SessionResult> server;

  explicit Harness(std::vector<EpisodeJob> jobs, ServeConfig cfg = {}) : queue(std::move(jobs)), config(cfg) {
    const auto [a, b] = socket_pair();
    client_fd = a;
    client = std::make_unique<FdChannel>(a, a, true);
    server = std::async(std::launch::async, [this, fd = b] {
      FdChannel ch(fd, fd, true);
      return serve_session(ch, queue, config, "s0");
    });
  }
};

std::string error_code_of(const SessionResult& r) {
  const auto& last = r.transcript.frames.back();
  REQUIRE(last.from_server);
  REQUIRE(last.frame.value("type", "") == "error");
  return last.frame.value("code", "");
}

}  // namespace

TEST_CASE("handshake opens a session") {
  Harness h({});
  h.client->send({{"proto", "figr/1"}});
  const auto ack = h.client->receive(std::chrono::seconds(5));
  CHECK(ack["proto"] == "figr/1");
  CHECK(ack["ok"] == true);
  CHECK(ack["session_id"] == "s0");
  CHECK(ack["config"]["max_rounds"] == 3);
  h.client->send({{"type", "ready"}, {"session_id", "s0"}});
  CHECK(h.client->receive(std::chrono::seconds(5))["type"] == "bye");
  const auto r = h.server.get();
  CHECK_FALSE(r.error);
  CHECK(frames_alternate(r.transcript));
}

TEST_CASE("handshake mismatch closes the session with an error frame") {
  Harness h(jobs_for(Category::SegmentCrossings, 1));
  h.client->send({{"proto", "figr/0"}});
  const auto err = h.client->receive(std::chrono::seconds(5));
  CHECK(err["type"] == "error");
  CHECK(err["code"] == "HandshakeMismatch");
  const auto r = h.server.get();
  REQUIRE(r.error);
  CHECK(error_code_of(r) == "HandshakeMismatch");
  CHECK(r.episodes.empty());
  CHECK_THROWS_AS(h.client->receive(std::chrono::seconds(5)), Error);
}

TEST_CASE("a response without payload ends the session") {
  Harness h(jobs_for(Category::SegmentCrossings, 2));
  h.client->send({{"proto", "figr/1"}});
  h.client->receive(std::chrono::seconds(5));
  h.client->send({{"type", "ready"}, {"session_id", "s0"}});
  const auto act = h.client->receive(std::chrono::seconds(5));
  CHECK(act["type"] == "act");
  h.client->send({{"type", "act_response"}, {"session_id", "s0"}, {"text", "hi"}});
  const auto err = h.client->receive(std::chrono::seconds(5));
  CHECK(err["type"] == "error");
  CHECK(err["code"] == "ProtocolError");
  CHECK(err["message"].get<std::string>().find("payload") != std::string::npos);
  const auto r = h.server.get();
  CHECK(r.failed_job == 0u);
  CHECK(r.episodes.empty());
  CHECK(frames_alternate(r.transcript));
}

TEST_CASE("malformed client frames are rejected") {
  for (const std::string bad : {"not json at all", "[1, 2, 3]"}) {
    Harness h({});
    h.client->send({{"proto", "figr/1"}});
    h.client->receive(std::chrono::seconds(5));
    const std::string line = bad + "\n";
    REQUIRE(::write(h.client_fd, line.data(), line.size()) == static_cast<ssize_t>(line.size()));
    const auto err = h.client->receive(std::chrono::seconds(5));
    CHECK(err["code"] == "ProtocolError");
    CHECK(h.server.get().error);
  }
}

TEST_CASE("oversized frames are refused") {
  Harness h({});
  h.client->send({{"proto", "figr/1"}});
  h.client->receive(std::chrono::seconds(5));
  std::thread writer([fd = h.client_fd] {
    const std::string chunk(1 << 20, 'x');
    for (int i = 0; i < 9; ++i)
      if (::send(fd, chunk.data(), chunk.size(), MSG_NOSIGNAL) < 0) return;
  });
  const auto r = h.server.get();
  writer.join();
  REQUIRE(r.error);
  CHECK(error_code_of(r) == "FrameTooLarge");

  FdChannel sink(-1, h.client_fd, false);
  CHECK_THROWS_AS(sink.send(json{{"blob", std::string(kMaxFrameBytes, 'y')}}), Error);
}

TEST_CASE("silent clients time out") {
  ServeConfig cfg;
  cfg.act_timeout = std::chrono::milliseconds(150);
  Harness h(jobs_for(Category::SegmentCrossings, 1), cfg);
  h.client->send({{"proto", "figr/1"}});
  h.client->receive(std::chrono::seconds(5));
  h.client->send({{"type", "ready"}, {"session_id", "s0"}});
  CHECK(h.client->receive(std::chrono::seconds(5))["type"] == "act");
  const auto err = h.client->receive(std::chrono::seconds(5));
  CHECK(err["code"] == "Timeout");
  CHECK(h.server.get().failed_job == 0u);
}

TEST_CASE("scripted two-turn episode replays to the served trajectory") {
  auto jobs = jobs_for(Category::SegmentCrossings, 1);
  Harness h(jobs);
  const auto script = figr::rollout::ScriptedPolicy(
      {"Drawing.\n```figscript\nA = segment((0,0), (2,2))\nB = segment((0,2), (2,0))\nans = crossings(A, B)\n```",
       "<answer>1</answer> <End>"});
  const auto client = run_client(*h.client, script, std::chrono::seconds(5));
  const auto served = h.server.get();
  REQUIRE_FALSE(served.error);
  REQUIRE(served.episodes.size() == 1);
  const auto& t = served.episodes[0].trajectory;
  CHECK(t.turns.size() == 2);
  CHECK(t.behavior.code_blocks == 1);
  CHECK(t.final_answer == "1");

  REQUIRE(client.episode_ends.size() == 1);
  CHECK(client.episode_ends[0]["context_hash"] == t.context_hash);
  CHECK(client.episode_ends[0]["episode_id"] == jobs[0].problem.id);

  for (const auto* tr : {&served.transcript, &client.transcript}) {
    CHECK(frames_alternate(*tr));
    const auto replayed = replay_transcript(*tr);
    REQUIRE(replayed.size() == 1);
    CHECK(replayed[0].matches());
    CHECK(replayed[0].trajectory.context_hash == t.context_hash);
    REQUIRE(replayed[0].trajectory.turns.size() == t.turns.size());
    for (std::size_t i = 0; i < t.turns.size(); ++i)
      CHECK(replayed[0].trajectory.turns[i].action.payload == t.turns[i].action.payload);
  }

  // The figure produced by the construction crosses the wire intact.
  bool saw_figure = false;
  for (const auto& f : served.transcript.frames) {
    if (!f.from_server || f.frame.value("type", "") != "act") continue;
    figr::evalbench::ProblemRecord p;
    const auto view = view_from_act_frame(f.frame, p);
    for (const auto& e : view.entries)
      if (e.kind == figr::rollout::EntryKind::FigureRef) {
        REQUIRE(e.figure);
        const auto& src = *t.turns[0].outcome->raster;
        CHECK(e.figure->pixels == src.pixels);
        CHECK(e.text == figr::figscript::raster_summary(src));
        saw_figure = true;
      }
  }
  CHECK(saw_figure);
}

TEST_CASE("transcripts survive a write and read") {
  Harness h(jobs_for(Category::CircleLineHits, 3));
  run_client(*h.client, figr::evalbench::ConstructThenAnswerPolicy(), std::chrono::seconds(5));
  const auto served = h.server.get();
  std::stringstream ss;
  write_transcript(ss, served.transcript);
  const auto back = read_transcript(ss);
  CHECK(back.session_id == "s0");
  REQUIRE(back.frames.size() == served.transcript.frames.size());
  for (std::size_t i = 0; i < back.frames.size(); ++i) {
    CHECK(back.frames[i].from_server == served.transcript.frames[i].from_server);
    CHECK(back.frames[i].frame == served.transcript.frames[i].frame);
  }
  const auto replayed = replay_transcript(back);
  REQUIRE(replayed.size() == 3);
  for (const auto& r : replayed) CHECK(r.matches());
  std::istringstream bad("{\"dir\":\"sideways\",\"frame\":{}}\n");
  CHECK_THROWS_AS(read_transcript(bad), Error);
}

TEST_CASE("construct-then-answer solves segment problems over the wire") {
  Harness h(jobs_for(Category::SegmentCrossings, 50, 4));
  const auto client = run_client(*h.client, figr::evalbench::ConstructThenAnswerPolicy(), std::chrono::seconds(5));
  const auto served = h.server.get();
  REQUIRE(client.episode_ends.size() == 50);
  std::size_t correct = 0;
  for (const auto& e : client.episode_ends) correct += e["correct"].get<bool>();
  CHECK(correct == 50);
  for (const auto& e : client.episode_ends) CHECK(e["reward"].get<double>() == 3.0);
  const auto replayed = replay_transcript(client.transcript);
  REQUIRE(replayed.size() == 50);
  for (const auto& r : replayed) CHECK(r.matches());
}

TEST_CASE("wire sessions match in-process episodes for the toy policy") {
  figr::Rng rng(12);
  figr::grpo::ToyPolicy policy;
  for (auto& v : policy.params) v = rng.uniform(-1.0, 1.0);
  const figr::grpo::ToyPolicyHandle handle(policy);
  std::vector<EpisodeJob> jobs;
  for (auto cat : {Category::SegmentCrossings, Category::PolygonLatticePoints, Category::ArithmeticNoFigure}) {
    auto part = jobs_for(cat, 6, 9);
    jobs.insert(jobs.end(), part.begin(), part.end());
  }
  Harness h(jobs);
  run_client(*h.client, handle, std::chrono::seconds(5));
  const auto served = h.server.get();
  REQUIRE(served.episodes.size() == jobs.size());
  for (const auto& e : served.episodes) {
    const auto& job = jobs[e.job_index];
    const auto local = figr::rollout::run_episode(job.problem, handle, {}, job.seed);
    CHECK(local.context_hash == e.trajectory.context_hash);
  }
}

TEST_CASE("tcp sessions share the work queue") {
  TcpListener listener("127.0.0.1", 0);
  REQUIRE(listener.port() != 0);
  auto jobs = jobs_for(Category::PolygonLatticePoints, 12, 3);
  WorkQueue queue(jobs);
  ServeConfig cfg;
  auto server = std::async(std::launch::async, [&] { return serve_tcp(listener, queue, cfg); });
  // Connect first so every client is queued before the first session drains the work.
  std::vector<int> fds;
  for (int i = 0; i < 3; ++i) fds.push_back(tcp_connect("127.0.0.1", listener.port()));
  std::vector<std::future<ClientResult>> clients;
  for (int fd : fds)
    clients.push_back(std::async(std::launch::async, [fd] {
      FdChannel ch(fd, fd, true);
      return run_client(ch, figr::evalbench::ConstructThenAnswerPolicy(), std::chrono::seconds(10));
    }));
  std::size_t ends = 0;
  for (auto& c : clients) {
    const auto r = c.get();
    ends += r.episode_ends.size();
    for (const auto& e : r.episode_ends) CHECK(e["correct"] == true);
    for (const auto& ep : replay_transcript(r.transcript)) CHECK(ep.matches());
  }
  CHECK(ends == 12);
  const auto sessions = server.get();
  REQUIRE(sessions.size() == 3);
  std::set<std::size_t> done;
  std::set<std::string> ids;
  for (const auto& s : sessions) {
    CHECK_FALSE(s.error);
    CHECK(frames_alternate(s.transcript));
    ids.insert(s.transcript.session_id);
    for (const auto& e : s.episodes) done.insert(e.job_index);
  }
  CHECK(done.size() == 12);
  CHECK(ids == std::set<std::string>{"s0", "s1", "s2"});
}

TEST_CASE("endpoint parsing") {
  CHECK(parse_endpoint("127.0.0.1:7000") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 7000});
  CHECK(parse_endpoint("[::1]:80").first == "::1");
  CHECK_THROWS_AS(parse_endpoint("localhost"), Error);
  CHECK_THROWS_AS(parse_endpoint("h:99999"), Error);
}
