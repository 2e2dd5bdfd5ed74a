#pragma once

#include <memory>
#include <string>

#include "qorch/server/core.hpp"

namespace qorch::server {

// HTTP front for the core: the gateway endpoints (problems, instances,
// definitions, devices) and the broker wire (workers, jobs). Runs its own
// listener thread.
class HttpServer {
  public:
    explicit HttpServer(Core& core);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds and starts serving; port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

  private:
    struct Impl;
    Core& core_;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace qorch::server
