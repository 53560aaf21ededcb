// SPDX-License-Identifier: Apache-2.0
#include "figr/bridge/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include <fmt/format.h>

#include "figr/util/error.hpp"

namespace figr::bridge {

namespace {

std::string errno_text() { return std::strerror(errno); }

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd, bool owns, std::size_t max_frame_bytes)
    : rfd_(read_fd), wfd_(write_fd), owns_(owns), max_(max_frame_bytes) {}

FdChannel::~FdChannel() {
  if (!owns_) return;
  if (rfd_ >= 0) ::close(rfd_);
  if (wfd_ >= 0 && wfd_ != rfd_) ::close(wfd_);
}

void FdChannel::send(const nlohmann::json& frame) {
  std::string line = frame.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  if (line.size() > max_)
    throw Error(Errc::FrameTooLarge, fmt::format("outgoing frame of {} bytes exceeds {}", line.size(), max_));
  line.push_back('\n');
  std::size_t off = 0;
  while (off < line.size()) {
    ssize_t n = ::send(wfd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) n = ::write(wfd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Io, "write failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

nlohmann::json FdChannel::receive(std::chrono::milliseconds timeout) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + timeout;
  for (;;) {
    const auto nl = buf_.find('\n', scanned_);
    if (nl != std::string::npos) {
      std::string line = buf_.substr(0, nl);
      buf_.erase(0, nl + 1);
      scanned_ = 0;
      if (line.size() > max_)
        throw Error(Errc::FrameTooLarge, fmt::format("incoming frame of {} bytes exceeds {}", line.size(), max_));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) throw Error(Errc::ProtocolError, "frame is not valid JSON");
      if (!j.is_object()) throw Error(Errc::ProtocolError, "frame is not a JSON object");
      return j;
    }
    scanned_ = buf_.size();
    if (buf_.size() > max_)
      throw Error(Errc::FrameTooLarge, fmt::format("incoming frame exceeds {} bytes", max_));
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (left <= 0) throw Error(Errc::Timeout, fmt::format("no frame within {} ms", timeout.count()));
    pollfd p{rfd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Io, "poll failed: " + errno_text());
    }
    if (rc == 0) throw Error(Errc::Timeout, fmt::format("no frame within {} ms", timeout.count()));
    char tmp[65536];
    const ssize_t n = ::read(rfd_, tmp, sizeof tmp);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw Error(Errc::Io, "read failed: " + errno_text());
    }
    if (n == 0) throw Error(Errc::ProtocolError, "peer closed the connection");
    buf_.append(tmp, static_cast<std::size_t>(n));
  }
}

void FdChannel::shutdown_write() {
  if (::shutdown(wfd_, SHUT_WR) != 0 && errno == ENOTSOCK && owns_ && wfd_ != rfd_) {
    ::close(wfd_);
    wfd_ = -1;
  }
}

std::pair<int, int> socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) throw Error(Errc::Io, "socketpair failed: " + errno_text());
  return {fds[0], fds[1]};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0)
    throw Error(Errc::Io, fmt::format("cannot resolve {}: {}", host, ::gai_strerror(rc)));
  std::string last = "no addresses";
  for (auto* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      fd_ = fd;
      break;
    }
    last = errno_text();
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw Error(Errc::Io, fmt::format("cannot listen on {}:{}: {}", host, port, last));
  sockaddr_storage ss{};
  socklen_t len = sizeof ss;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len);
  port_ = ss.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port)
                                   : ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<int> TcpListener::accept(std::chrono::milliseconds timeout) {
  pollfd p{fd_, POLLIN, 0};
  const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (rc <= 0) return std::nullopt;
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  return fd;
}

int tcp_connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
    throw Error(Errc::Io, fmt::format("cannot resolve {}: {}", host, ::gai_strerror(rc)));
  int out = -1;
  for (auto* ai = res; ai && out < 0; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
      out = fd;
    else
      ::close(fd);
  }
  ::freeaddrinfo(res);
  if (out < 0) throw Error(Errc::Io, fmt::format("cannot connect to {}:{}", host, port));
  return out;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos) throw Error(Errc::InvalidArgument, "endpoint must be host:port, got " + endpoint);
  const auto port_text = endpoint.substr(colon + 1);
  char* end = nullptr;
  const long port = std::strtol(port_text.c_str(), &end, 10);
  if (port_text.empty() || *end != '\0' || port < 0 || port > 65535)
    throw Error(Errc::InvalidArgument, "bad port in endpoint " + endpoint);
  auto host = endpoint.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace figr::bridge
