#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "juliart/diagnostic.hpp"
#include "juliart/service/render_job.hpp"

namespace juliart::service {

/// Non-blocking counting semaphore: a job either gets a slot right away or is
/// turned away.
class JobGate {
 public:
  explicit JobGate(unsigned capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  class Slot {
   public:
    Slot() = default;
    explicit Slot(JobGate* gate) : gate_(gate) {}
    Slot(Slot&& other) noexcept : gate_(std::exchange(other.gate_, nullptr)) {}
    Slot& operator=(Slot&& other) noexcept {
      release();
      gate_ = std::exchange(other.gate_, nullptr);
      return *this;
    }
    ~Slot() { release(); }

    explicit operator bool() const { return gate_ != nullptr; }

   private:
    void release() {
      if (gate_) gate_->active_.fetch_sub(1);
      gate_ = nullptr;
    }
    JobGate* gate_ = nullptr;
  };

  Slot try_enter();
  unsigned capacity() const { return capacity_; }
  unsigned active() const { return active_.load(); }

 private:
  unsigned capacity_;
  std::atomic<unsigned> active_{0};
};

/// Parses the JSON body of POST /render. Throws SceneError(Request) on
/// malformed JSON, unknown fields or wrongly typed values. Does not validate
/// the ranges; see RenderRequest::validate.
RenderRequest parse_render_request(std::string_view body);

/// {"error": {"kind", "message", "line", "column", "trace"}}; line and column
/// are null when the error has no source position.
std::string error_json(const SceneError& error);

/// 400 for request errors, 422 for scene errors (lexical through limit),
/// 500 otherwise.
int http_status(ErrorKind kind);

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  unsigned jobs = 0;  // concurrent renders; 0 means the worker count
  RenderSettings render;
};

class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket and returns the bound port. Throws SceneError(Io).
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  void stop();
  bool running() const;
  JobGate& jobs();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace juliart::service
