// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

namespace figr::bridge {

inline constexpr std::size_t kMaxFrameBytes = 8u << 20;
inline constexpr std::chrono::milliseconds kDefaultActTimeout{120'000};

/// Newline-delimited JSON over a file descriptor (pipe, socket or stdio).
class FdChannel {
 public:
  /// Owns both descriptors when `owns` is set; read_fd may equal write_fd.
  FdChannel(int read_fd, int write_fd, bool owns, std::size_t max_frame_bytes = kMaxFrameBytes);
  ~FdChannel();
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  /// Throws FrameTooLarge for oversized frames and Io on write failure.
  void send(const nlohmann::json& frame);
  /// Next non-blank line as a JSON object. Throws Timeout, FrameTooLarge,
  /// ProtocolError (bad JSON, non-object, peer closed) or Io.
  nlohmann::json receive(std::chrono::milliseconds timeout);
  /// Closes the write side so the peer sees end of stream.
  void shutdown_write();

 private:
  int rfd_, wfd_;
  bool owns_;
  std::size_t max_;
  std::string buf_;
  std::size_t scanned_ = 0;
};

/// Connected pair of stream sockets for in-process sessions.
std::pair<int, int> socket_pair();

class TcpListener {
 public:
  /// Port 0 picks an ephemeral port.
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  /// Connected descriptor, or nullopt when nothing arrived within `timeout`.
  std::optional<int> accept(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

int tcp_connect(const std::string& host, std::uint16_t port);

/// "host:port" split; throws InvalidArgument.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace figr::bridge
