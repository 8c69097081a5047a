#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenegen::mock {

/// Canned answers of the mock policy/scorer service.
struct Behavior {
  /// /act answers, indexed by the request's sample_index (cycling).
  std::vector<std::string> action_texts{""};
  /// The first N requests (any endpoint) get HTTP 500.
  int fail_first = 0;
  /// Every request gets HTTP 500.
  bool always_fail = false;
  double score = 0.5;
  std::string description = "small red book";
  int pixel_u = 128;
  int pixel_v = 128;
};

/// In-process HTTP server implementing POST /act, /place and /score.
class Server {
 public:
  explicit Server(Behavior behavior = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to 127.0.0.1 (port 0 = any free port) and serves on a background thread.
  int start(int port = 0);
  void stop();

  std::string endpoint() const;
  void set_behavior(Behavior behavior);

  /// Request bodies received so far, in arrival order.
  std::vector<nlohmann::json> requests() const;
  int request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scenegen::mock
