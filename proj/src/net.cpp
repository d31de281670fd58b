// Copyright 2026 The Bonsai Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bonsai/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace bonsai {
namespace {

std::string errno_text() { return std::strerror(errno); }

void send_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorKind::kProtocol, "send failed: " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

// Reads into the decoder until a full frame is available. Returns nullopt on
// a clean end of stream between frames.
std::optional<Frame> read_frame(int fd, FrameDecoder& decoder) {
  std::uint8_t buf[64 * 1024];
  for (;;) {
    if (auto f = decoder.next()) return f;
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorKind::kProtocol, "recv failed: " + errno_text());
    }
    if (n == 0) {
      if (decoder.buffered() != 0) fail(ErrorKind::kProtocol, "connection closed mid-frame");
      return std::nullopt;
    }
    decoder.feed(std::span<const std::uint8_t>(buf, static_cast<std::size_t>(n)));
  }
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

UploadStatus status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConflict: return UploadStatus::kDuplicate;
    case ErrorKind::kParameter:
    case ErrorKind::kRange: return UploadStatus::kBadLength;
    default: break;
  }
  fail(kind, "upload failed");
}

}  // namespace

Address parse_address(const std::string& text) {
  Address a;
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) fail(ErrorKind::kParameter, "address must be host:port, got '" + text + "'");
  if (colon > 0) a.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  char* end = nullptr;
  const long p = std::strtol(port.c_str(), &end, 10);
  if (port.empty() || *end != '\0' || p < 0 || p > 65535) {
    fail(ErrorKind::kParameter, "invalid port in address '" + text + "'");
  }
  a.port = static_cast<std::uint16_t>(p);
  return a;
}

Address resolve_address(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return parse_address(*flag);
  if (const char* env = std::getenv("BONSAI_ADDR"); env != nullptr && *env != '\0') {
    return parse_address(env);
  }
  return Address{};
}

Frame handle_request(CloudEngine& engine, const Frame& request) {
  const SystemConfig& cfg = engine.config();
  switch (request.type) {
    case MsgType::kUpload: {
      const UploadMsg msg = decode_upload(request);
      UploadAck ack{msg.file_id, UploadStatus::kOk};
      if (msg.k != cfg.k || msg.outsource.size() != cfg.n_b) {
        ack.status = UploadStatus::kBadLength;
      } else {
        try {
          engine.dedup(msg.file_id, msg.outsource);
        } catch (const Error& e) {
          ack.status = status_for(e.kind());
        }
      }
      return encode(ack);
    }
    case MsgType::kGet: {
      const GetMsg msg = decode_get(request);
      GetResp resp{msg.file_id, GetStatus::kOk, {}};
      try {
        resp.outsource = engine.decompress(msg.file_id);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNotFound) throw;
        resp.status = GetStatus::kNotFound;
      }
      return encode(resp, cfg.k);
    }
    case MsgType::kGetPolicy: {
      decode_get_policy(request);
      PolicyMsg p;
      p.n_b = static_cast<std::uint32_t>(cfg.n_b);
      p.k = cfg.k;
      p.counts = engine.policy_counts();
      return encode(p);
    }
    default:
      break;
  }
  fail(ErrorKind::kProtocol, "message type " + std::to_string(static_cast<int>(request.type)) +
                                 " is not a request");
}

Server::Server(CloudEngine& engine, Address address)
    : engine_(engine), address_(std::move(address)) {}

Server::~Server() { stop(); }

void Server::start() {
  if (listen_fd_ >= 0) fail(ErrorKind::kInternal, "server already started");
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(address_.port);
  if (int rc = ::getaddrinfo(address_.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    fail(ErrorKind::kParameter, "cannot resolve " + address_.host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = errno_text();
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) {
    fail(ErrorKind::kParameter, "cannot listen on " + address_.host + ":" + port + ": " + last_error);
  }
  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = bound.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  stopping_ = false;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 100);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    reap_finished();
    std::lock_guard lock(conns_mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    Connection& conn = conns_.emplace_back();
    conn.fd = fd;
    conn.thread = std::thread([this, &conn] { serve_connection(conn); });
  }
}

void Server::serve_connection(Connection& conn) {
  FrameDecoder decoder;
  try {
    while (auto request = read_frame(conn.fd, decoder)) {
      send_all(conn.fd, encode_frame(handle_request(engine_, *request)));
    }
  } catch (const std::exception&) {
    // A bad frame or a broken socket ends this connection only.
  }
  ::shutdown(conn.fd, SHUT_RDWR);
  conn.done = true;
}

void Server::reap_finished() {
  std::lock_guard lock(conns_mutex_);
  for (auto it = conns_.begin(); it != conns_.end();) {
    if (it->done) {
      it->thread.join();
      ::close(it->fd);
      it = conns_.erase(it);
    } else {
      ++it;
    }
  }
}

void Server::stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard lock(conns_mutex_);
    for (auto& c : conns_) ::shutdown(c.fd, SHUT_RDWR);
  }
  std::lock_guard lock(conns_mutex_);
  for (auto& c : conns_) {
    if (c.thread.joinable()) c.thread.join();
    ::close(c.fd);
  }
  conns_.clear();
  ::close(listen_fd_);
  listen_fd_ = -1;
}

PolicyMsg LocalEndpoint::fetch_policy() {
  return decode_policy(handle_request(engine_, encode_get_policy()));
}

UploadStatus LocalEndpoint::upload(FileId id, std::span<const Symbol> outsource, unsigned k) {
  UploadMsg msg{id, k, Outsource(outsource.begin(), outsource.end())};
  return decode_upload_ack(handle_request(engine_, encode(msg))).status;
}

std::optional<Outsource> LocalEndpoint::get(FileId id, unsigned k) {
  auto resp = decode_get_resp(handle_request(engine_, encode(GetMsg{id})), k);
  if (resp.status != GetStatus::kOk) return std::nullopt;
  return std::move(resp.outsource);
}

RemoteClient::RemoteClient(const Address& address) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(address.port);
  if (int rc = ::getaddrinfo(address.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw ConnectError("cannot resolve " + address.host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    last_error = errno_text();
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    throw ConnectError("cannot connect to " + address.host + ":" + port + ": " + last_error);
  }
  set_nodelay(fd_);
}

RemoteClient::~RemoteClient() {
  if (fd_ >= 0) ::close(fd_);
}

Frame RemoteClient::round_trip(const Frame& request) {
  send_all(fd_, encode_frame(request));
  auto reply = read_frame(fd_, decoder_);
  if (!reply) fail(ErrorKind::kProtocol, "server closed the connection");
  return std::move(*reply);
}

PolicyMsg RemoteClient::fetch_policy() { return decode_policy(round_trip(encode_get_policy())); }

UploadStatus RemoteClient::upload(FileId id, std::span<const Symbol> outsource, unsigned k) {
  UploadMsg msg{id, k, Outsource(outsource.begin(), outsource.end())};
  const UploadAck ack = decode_upload_ack(round_trip(encode(msg)));
  if (ack.file_id != id) fail(ErrorKind::kProtocol, "acknowledgement for a different file id");
  return ack.status;
}

std::optional<Outsource> RemoteClient::get(FileId id, unsigned k) {
  auto resp = decode_get_resp(round_trip(encode(GetMsg{id})), k);
  if (resp.file_id != id) fail(ErrorKind::kProtocol, "response for a different file id");
  if (resp.status != GetStatus::kOk) return std::nullopt;
  return std::move(resp.outsource);
}

}  // namespace bonsai
