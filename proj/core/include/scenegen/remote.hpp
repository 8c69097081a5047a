#pragma once

#include <chrono>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "scenegen/policy.hpp"
#include "scenegen/scorer.hpp"

namespace scenegen {

class AssetIndex;

struct RemoteOptions {
  std::string endpoint;  // scheme://host:port
  double timeout_s = 30.0;
  int retries = 3;  // extra attempts after the first
  double backoff_base_s = 1.0;
  double backoff_factor = 2.0;
  int max_in_flight = 8;
};

/// JSON-over-HTTP POST with retry and exponential backoff. Connection errors
/// and 5xx responses are retried; 4xx and malformed bodies are not. Safe for
/// concurrent use; at most max_in_flight requests are outstanding.
class RemoteClient {
 public:
  explicit RemoteClient(RemoteOptions options);
  ~RemoteClient();
  RemoteClient(const RemoteClient&) = delete;
  RemoteClient& operator=(const RemoteClient&) = delete;

  /// Throws BackendError; unreachable() errors mean no attempt got a response.
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

  const RemoteOptions& options() const { return options_; }

 private:
  struct Limiter;
  RemoteOptions options_;
  std::unique_ptr<Limiter> limiter_;
};

/// POST /act {prompt, step, sample_index, views, scene_summary, in_context} -> {action_text}.
class RemotePolicy final : public PolicyBackend {
 public:
  explicit RemotePolicy(RemoteOptions options) : client_(std::move(options)) {}
  std::string act(const ActRequest& request) override;
  static nlohmann::json encode(const ActRequest& request);

 private:
  RemoteClient client_;
};

/// POST /place, called twice per round: {phase: "describe", ...} -> {description},
/// then {phase: "locate", description, ...} -> {pixel: [u, v]}.
class RemotePlacementPolicy final : public PlacementPolicy {
 public:
  explicit RemotePlacementPolicy(RemoteOptions options) : client_(std::move(options)) {}
  std::string describe(const PlacementRequest& request) override;
  Pixel locate(const PlacementRequest& request, const std::string& description) override;
  static nlohmann::json encode(const PlacementRequest& request);

 private:
  RemoteClient client_;
};

/// POST /score {prompt, scene_summary} -> {score}.
class RemoteScorer final : public Scorer {
 public:
  RemoteScorer(RemoteOptions options, const AssetIndex* assets = nullptr)
      : client_(std::move(options)), assets_(assets) {}
  double score(const Scene& scene, const std::string& prompt) const override;

 private:
  RemoteClient client_;
  const AssetIndex* assets_;
};

}  // namespace scenegen
