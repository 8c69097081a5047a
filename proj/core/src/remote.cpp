#include "scenegen/remote.hpp"

#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "scenegen/errors.hpp"
#include "scenegen/summary.hpp"

namespace scenegen {

using nlohmann::json;

struct RemoteClient::Limiter {
  std::mutex mu;
  std::condition_variable cv;
  int available;

  explicit Limiter(int n) : available(n < 1 ? 1 : n) {}
  void acquire() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }
  void release() {
    {
      std::lock_guard lock(mu);
      ++available;
    }
    cv.notify_one();
  }
};

RemoteClient::RemoteClient(RemoteOptions options)
    : options_(std::move(options)), limiter_(std::make_unique<Limiter>(options_.max_in_flight)) {
  if (options_.endpoint.empty()) throw Error(ErrorKind::kInvalidInput, "remote endpoint is empty");
}

RemoteClient::~RemoteClient() = default;

json RemoteClient::post(const std::string& path, const json& body) const {
  const std::string payload = body.dump();
  std::string last_error;
  bool any_response = false;
  double delay = options_.backoff_base_s;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      delay *= options_.backoff_factor;
    }
    limiter_->acquire();
    httplib::Result res{nullptr, httplib::Error::Unknown};
    {
      httplib::Client cli(options_.endpoint);
      const auto secs = static_cast<time_t>(options_.timeout_s);
      const auto usecs = static_cast<time_t>((options_.timeout_s - static_cast<double>(secs)) * 1e6);
      cli.set_connection_timeout(secs, usecs);
      cli.set_read_timeout(secs, usecs);
      cli.set_write_timeout(secs, usecs);
      res = cli.Post(path, payload, "application/json");
    }
    limiter_->release();
    if (!res) {
      last_error = "request to " + options_.endpoint + path + " failed: " + httplib::to_string(res.error());
      continue;
    }
    any_response = true;
    if (res->status >= 500) {
      last_error = options_.endpoint + path + " returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(options_.endpoint + path + " returned HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw BackendError(options_.endpoint + path + " returned malformed JSON: " + e.what());
    }
  }
  throw BackendError(last_error + " (after " + std::to_string(options_.retries + 1) + " attempts)", !any_response);
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw BackendError(where + " response lacks \"" + key + "\"");
  return j.at(key);
}

}  // namespace

json RemotePolicy::encode(const ActRequest& request) {
  json views = json::array();
  if (request.views) {
    for (const auto& v : request.views->views) views.push_back(view_to_json(v));
  }
  json examples = json::array();
  for (const auto& e : request.in_context) examples.push_back(json{{"prompt", e.prompt}, {"action_text", e.action_text}});
  return json{{"prompt", request.prompt},
              {"step", request.step},
              {"sample_index", request.sample_index},
              {"views", std::move(views)},
              {"scene_summary", request.scene_summary},
              {"in_context", std::move(examples)}};
}

std::string RemotePolicy::act(const ActRequest& request) {
  const json res = client_.post("/act", encode(request));
  const json& text = field(res, "action_text", "/act");
  if (!text.is_string()) throw BackendError("/act action_text is not a string");
  return text.get<std::string>();
}

json RemotePlacementPolicy::encode(const PlacementRequest& request) {
  json j{{"prompt", request.prompt},
         {"receptacle_summary", request.receptacle_summary},
         {"round", request.round},
         {"successes", request.successes}};
  j["view"] = request.view ? view_to_json(*request.view) : json();
  return j;
}

std::string RemotePlacementPolicy::describe(const PlacementRequest& request) {
  json body = encode(request);
  body["phase"] = "describe";
  const json res = client_.post("/place", body);
  const json& d = field(res, "description", "/place");
  if (!d.is_string() || d.get<std::string>().empty()) throw BackendError("/place description is not a non-empty string");
  return d.get<std::string>();
}

Pixel RemotePlacementPolicy::locate(const PlacementRequest& request, const std::string& description) {
  json body = encode(request);
  body["phase"] = "locate";
  body["description"] = description;
  const json res = client_.post("/place", body);
  const json& p = field(res, "pixel", "/place");
  if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
    throw BackendError("/place pixel must be [u, v] integers");
  }
  return {p[0].get<int>(), p[1].get<int>()};
}

double RemoteScorer::score(const Scene& scene, const std::string& prompt) const {
  const json res = client_.post("/score", json{{"prompt", prompt}, {"scene_summary", scene_summary(scene, assets_)}});
  const json& s = field(res, "score", "/score");
  if (!s.is_number()) throw BackendError("/score score is not a number");
  const double v = s.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw BackendError("/score score outside [0, 1]");
  return v;
}

}  // namespace scenegen
