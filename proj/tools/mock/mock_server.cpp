#include "mock_server.hpp"

#include <httplib.h>

namespace scenegen::mock {

using nlohmann::json;

struct Server::Impl {
  httplib::Server http;
  std::thread thread;
  int port = 0;
  mutable std::mutex mu;
  Behavior behavior;
  std::vector<json> requests;
  int served = 0;
};

Server::Server(Behavior behavior) : impl_(std::make_unique<Impl>()) {
  impl_->behavior = std::move(behavior);
  const auto handler = [this](const std::string& route) {
    return [this, route](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(impl_->mu);
      const int n = impl_->served++;
      json body = json::parse(req.body, nullptr, false);
      impl_->requests.push_back(body);
      const Behavior& b = impl_->behavior;
      if (b.always_fail || n < b.fail_first) {
        res.status = 500;
        res.set_content(R"({"error":"injected failure"})", "application/json");
        return;
      }
      if (body.is_discarded()) {
        res.status = 400;
        res.set_content(R"({"error":"malformed JSON"})", "application/json");
        return;
      }
      json out;
      if (route == "/act") {
        const auto i = body.value("sample_index", 0);
        const auto& texts = b.action_texts;
        out["action_text"] = texts.empty() ? std::string() : texts[static_cast<std::size_t>(i) % texts.size()];
      } else if (route == "/place") {
        if (body.value("phase", "") == "locate") {
          out["pixel"] = {b.pixel_u, b.pixel_v};
        } else {
          out["description"] = b.description;
        }
      } else {
        out["score"] = b.score;
      }
      res.set_content(out.dump(), "application/json");
    };
  };
  impl_->http.Post("/act", handler("/act"));
  impl_->http.Post("/place", handler("/place"));
  impl_->http.Post("/score", handler("/score"));
}

Server::~Server() { stop(); }

int Server::start(int port) {
  if (port == 0) {
    impl_->port = impl_->http.bind_to_any_port("127.0.0.1");
  } else {
    impl_->port = impl_->http.bind_to_port("127.0.0.1", port) ? port : -1;
  }
  if (impl_->port <= 0) throw std::runtime_error("mock server cannot bind");
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return impl_->port;
}

void Server::stop() {
  if (impl_->thread.joinable()) {
    impl_->http.stop();
    impl_->thread.join();
  }
}

std::string Server::endpoint() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

void Server::set_behavior(Behavior behavior) {
  std::lock_guard lock(impl_->mu);
  impl_->behavior = std::move(behavior);
  impl_->served = 0;
}

std::vector<json> Server::requests() const {
  std::lock_guard lock(impl_->mu);
  return impl_->requests;
}

int Server::request_count() const {
  std::lock_guard lock(impl_->mu);
  return static_cast<int>(impl_->requests.size());
}

}  // namespace scenegen::mock
