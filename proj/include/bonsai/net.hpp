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

#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>

#include "bonsai/alphabet.hpp"
#include "bonsai/cloud_engine.hpp"
#include "bonsai/error.hpp"
#include "bonsai/wire.hpp"

namespace bonsai {

// Raised when the server cannot be reached at all, as opposed to a protocol
// failure on an established connection.
class ConnectError : public Error {
 public:
  explicit ConnectError(const std::string& message) : Error(ErrorKind::kProtocol, message) {}
};

struct Address {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7411;
};

// "host:port"; the host may be empty for the default.
Address parse_address(const std::string& text);
// --addr value if given, else BONSAI_ADDR, else 127.0.0.1:7411.
Address resolve_address(const std::optional<std::string>& flag);

// Answers one request frame against the engine. Protocol violations throw.
Frame handle_request(CloudEngine& engine, const Frame& request);

// Thread-per-connection TCP server over a shared engine.
class Server {
 public:
  Server(CloudEngine& engine, Address address);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting in the background. Port 0 picks a free port.
  void start();
  std::uint16_t port() const { return port_; }
  // Stops accepting, shuts down open connections and joins every thread.
  void stop();

 private:
  struct Connection {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve_connection(Connection& conn);
  void reap_finished();

  CloudEngine& engine_;
  Address address_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex conns_mutex_;
  std::list<Connection> conns_;
};

// What a client needs from the cloud: a policy, Upload and Get.
class CloudEndpoint {
 public:
  virtual ~CloudEndpoint() = default;
  virtual PolicyMsg fetch_policy() = 0;
  virtual UploadStatus upload(FileId id, std::span<const Symbol> outsource, unsigned k) = 0;
  virtual std::optional<Outsource> get(FileId id, unsigned k) = 0;
};

// In-process endpoint calling the engine directly.
class LocalEndpoint : public CloudEndpoint {
 public:
  explicit LocalEndpoint(CloudEngine& engine) : engine_(engine) {}
  PolicyMsg fetch_policy() override;
  UploadStatus upload(FileId id, std::span<const Symbol> outsource, unsigned k) override;
  std::optional<Outsource> get(FileId id, unsigned k) override;

 private:
  CloudEngine& engine_;
};

// One blocking TCP connection; requests are answered in order.
class RemoteClient : public CloudEndpoint {
 public:
  explicit RemoteClient(const Address& address);
  ~RemoteClient() override;
  RemoteClient(const RemoteClient&) = delete;
  RemoteClient& operator=(const RemoteClient&) = delete;

  PolicyMsg fetch_policy() override;
  UploadStatus upload(FileId id, std::span<const Symbol> outsource, unsigned k) override;
  std::optional<Outsource> get(FileId id, unsigned k) override;

 private:
  Frame round_trip(const Frame& request);

  int fd_ = -1;
  FrameDecoder decoder_;
};

}  // namespace bonsai
