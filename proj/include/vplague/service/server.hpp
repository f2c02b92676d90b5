#pragma once

#include <memory>
#include <string>

#include "vplague/service/session.hpp"

namespace vplague::service {

/// HTTP front end. JSON request and response bodies; the stream endpoint is
/// chunked NDJSON, one message per line. See docs/protocol.md.
class Server {
public:
  explicit Server(SessionManager& sessions);
  ~Server();

  /// Binds and serves until stop(). Returns false if the bind fails.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port; returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port().
  bool listen_after_bind();
  void stop();
  bool running() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vplague::service
