// SPDX-License-Identifier: Apache-2.0
#include "figr/bridge/client.hpp"

#include "figr/util/error.hpp"

namespace figr::bridge {

using nlohmann::json;

namespace {

[[noreturn]] void fail_on(const json& frame, std::string_view expected) {
  if (frame.value("type", std::string()) == "error")
    throw Error(Errc::ProtocolError, "server error " + frame.value("code", std::string("?")) + ": " +
                                         frame.value("message", std::string()));
  throw Error(Errc::ProtocolError, "expected " + std::string(expected) + ", got " + frame.dump());
}

}  // namespace

ClientResult run_client(FdChannel& channel, const rollout::PolicyHandle& policy, std::chrono::milliseconds timeout) {
  ClientResult res;
  auto send = [&](json j) {
    channel.send(j);
    res.transcript.frames.push_back({false, std::move(j)});
  };
  auto receive = [&] {
    auto j = channel.receive(timeout);
    res.transcript.frames.push_back({true, j});
    return j;
  };

  send({{"proto", kProtocolVersion}});
  const auto ack = receive();
  if (!ack.value("ok", false) || ack.value("proto", std::string()) != kProtocolVersion) fail_on(ack, "handshake ack");
  const auto sid = ack.at("session_id").get<std::string>();
  res.transcript.session_id = sid;

  for (;;) {
    send({{"type", "ready"}, {"session_id", sid}});
    auto frame = receive();
    const auto type = frame.value("type", std::string());
    if (type == "bye") break;
    if (type != "act") fail_on(frame, "act or bye");

    evalbench::ProblemRecord problem;
    auto view = view_from_act_frame(frame, problem);
    const auto session = policy.open(problem, frame.value("seed", std::uint64_t{0}));
    while (frame.value("type", std::string()) == "act") {
      view = view_from_act_frame(frame, problem);
      send({{"type", "act_response"}, {"session_id", sid}, {"payload", session->act(view).payload}});
      frame = receive();
    }
    if (frame.value("type", std::string()) != "episode_end") fail_on(frame, "act or episode_end");
    res.episode_ends.push_back(frame);
  }
  channel.shutdown_write();
  return res;
}

}  // namespace figr::bridge
