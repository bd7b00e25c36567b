#pragma once

// In-process HTTP server on an ephemeral loopback port, for exercising the
// remote scorer client.

#include <httplib.h>

#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tdm::testing {

class StubServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  /// Routes POST /score to `handler`, recording every request body.
  explicit StubServer(Handler handler) {
    server_.set_tcp_nodelay(true);
    server_.Post("/score", [this, handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mutex_);
        bodies_.push_back(req.body);
      }
      handler(req, res);
    });
    start();
  }

  /// Caller installs routes on server() before calling start().
  StubServer() { server_.set_tcp_nodelay(true); }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("stub server could not bind");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() { stop(); }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  httplib::Server& server() { return server_; }
  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<std::string> bodies() const {
    std::lock_guard lock(mutex_);
    return bodies_;
  }
  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return bodies_.size();
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  std::vector<std::string> bodies_;
};

}  // namespace tdm::testing
