/// @file server.hpp
/// @brief HTTP + websocket front end.
///
/// Routes:
///   ws  /stream           wire messages out, control messages in
///   GET /sessions         index of stored sessions, insertion order
///   GET /sessions/{id}    one verified session log (404 unknown, 500 corrupt)
///   GET /config           settings in force
///   GET /devices          capture devices
///   GET anything else     static file from static_dir, when configured

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "pitchgate/service/broadcaster.hpp"
#include "pitchgate/service/engine.hpp"

namespace pitchgate::service {

struct ServerConfig {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
  std::optional<std::filesystem::path> store;
  unsigned threads = 2;
};

class Server {
 public:
  Server(ServerConfig cfg, Broadcaster& broadcaster, Engine& engine);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving on background threads. Throws IoError if the port is taken.
  void start();
  /// Stops accepting and drops every connection. Idempotent.
  void stop();
  /// Bound port, valid after start().
  unsigned short port() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pitchgate::service
