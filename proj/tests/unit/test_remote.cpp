#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"
#include "mock_server.hpp"
#include "scenegen/asset_loop.hpp"
#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"
#include "scenegen/remote.hpp"
#include "scenegen/scene_json.hpp"
#include "scenegen/scene_loop.hpp"
#include "scenegen/summary.hpp"

using namespace scenegen;
using nlohmann::json;

namespace {

RemoteOptions fast_options(const std::string& endpoint, int retries = 3) {
  RemoteOptions o;
  o.endpoint = endpoint;
  o.retries = retries;
  o.backoff_base_s = 0.01;
  o.timeout_s = 5.0;
  return o;
}

ExecutionContext demo_ctx() {
  ExecutionContext ctx;
  ctx.assets = &fixtures::demo_assets();
  ctx.materials = &fixtures::demo_materials();
  return ctx;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST(Remote, ActEcho) {
  mock::Behavior b;
  b.action_texts = {"set_material(\"floors\", \"red brick\")", "f()"};
  mock::Server server(b);
  server.start();
  RemotePolicy policy(fast_options(server.endpoint()));
  ActRequest r;
  r.prompt = "brick";
  r.sample_index = 1;
  EXPECT_EQ(policy.act(r), "f()");
  r.sample_index = 0;
  EXPECT_EQ(policy.act(r), "set_material(\"floors\", \"red brick\")");
  EXPECT_EQ(server.request_count(), 2);
}

TEST(Remote, TransientFailuresAreRetried) {
  mock::Behavior b;
  b.fail_first = 2;
  b.score = 0.25;
  mock::Server server(b);
  server.start();
  RemoteScorer scorer(fast_options(server.endpoint(), 3));
  EXPECT_DOUBLE_EQ(scorer.score(fixtures::demo_room(), "x"), 0.25);
  EXPECT_EQ(server.request_count(), 3);
}

TEST(Remote, RetriesExhaustedOnServerErrors) {
  mock::Behavior b;
  b.always_fail = true;
  mock::Server server(b);
  server.start();
  RemoteScorer scorer(fast_options(server.endpoint(), 2));
  try {
    scorer.score(Scene{}, "x");
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInternal);
    EXPECT_NE(std::string(e.what()).find("500"), std::string::npos);
  }
  EXPECT_EQ(server.request_count(), 3);
}

TEST(Remote, UnreachableBacksOffThenFails) {
  std::string endpoint;
  {
    mock::Server server;
    server.start();
    endpoint = server.endpoint();
  }
  RemoteOptions o;
  o.endpoint = endpoint;
  o.retries = 2;
  o.timeout_s = 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RemoteClient(o).post("/act", json::object());
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBackendUnavailable);
  }
  // Backoff 1 s then 2 s.
  const double elapsed = seconds_since(t0);
  EXPECT_GE(elapsed, 3.0);
  EXPECT_LT(elapsed, 6.0);
}

TEST(Remote, ClientErrorsAreNotRetried) {
  mock::Server server;
  server.start();
  RemoteOptions o;
  o.endpoint = server.endpoint();
  o.retries = 3;
  o.backoff_base_s = 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(RemoteClient(o).post("/nowhere", json::object()), BackendError);
  EXPECT_LT(seconds_since(t0), 0.9);
}

TEST(Remote, MalformedAnswersAreBackendErrors) {
  mock::Behavior b;
  b.score = 1.5;
  mock::Server server(b);
  server.start();
  EXPECT_THROW(RemoteScorer(fast_options(server.endpoint())).score(Scene{}, "x"), BackendError);
}

TEST(Remote, RequestBodyMatchesEncoding) {
  mock::Behavior b;
  b.action_texts = {"f()"};
  mock::Server server(b);
  server.start();
  const Scene room = fixtures::demo_room();
  const SceneMeshResolver src(&fixtures::demo_assets());
  ViewOptions vo;
  vo.width = 32;
  vo.height = 24;
  vo.pano_height = 16;
  const ViewSet views = standard_viewset(room, src, vo);
  ActRequest r;
  r.prompt = "a room";
  r.step = 2;
  r.sample_index = 0;
  r.views = &views;
  r.scene_summary = scene_summary(room, &fixtures::demo_assets());
  r.in_context = {{"p", "a()"}};
  RemotePolicy policy(fast_options(server.endpoint()));
  policy.act(r);
  const auto got = server.requests().at(0);
  EXPECT_EQ(got, RemotePolicy::encode(r));
  ASSERT_EQ(got.at("views").size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    RenderMaps decoded;
    decode_map(base64_decode(got.at("views")[i].at("id_map").get<std::string>()), decoded);
    EXPECT_EQ(decoded.ids, views.views[i].maps.ids);
    EXPECT_EQ(decoded.width, views.views[i].maps.width);
  }
  EXPECT_EQ(got.at("in_context")[0].at("action_text"), "a()");
}

TEST(Remote, PlacementTwoPhase) {
  mock::Behavior b;
  b.description = "small red book";
  b.pixel_u = 7;
  b.pixel_v = 9;
  mock::Server server(b);
  server.start();
  RemotePlacementPolicy policy(fast_options(server.endpoint()));
  PlacementRequest req;
  req.prompt = "books";
  const auto d = policy.describe(req);
  const auto px = policy.locate(req, d);
  EXPECT_EQ(d, "small red book");
  EXPECT_EQ(px.u, 7);
  EXPECT_EQ(px.v, 9);
  const auto reqs = server.requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[0].at("phase"), "describe");
  EXPECT_EQ(reqs[1].at("phase"), "locate");
  EXPECT_EQ(reqs[1].at("description"), "small red book");
}

TEST(Remote, AllFailingPolicyGivesNoOpSteps) {
  mock::Behavior b;
  b.always_fail = true;
  mock::Server server(b);
  server.start();
  RemotePolicy policy(fast_options(server.endpoint(), 1));
  LexicalScorer scorer(&fixtures::demo_assets());
  SceneLoopConfig config;
  config.steps = 3;
  config.candidates = 2;
  config.render = false;
  const Scene room = fixtures::demo_room();
  const auto traj = run_scene_loop(room, "a room", policy, scorer, demo_ctx(), {}, config);
  ASSERT_EQ(traj.steps.size(), 3u);
  for (const auto& st : traj.steps) {
    EXPECT_FALSE(st.committed);
    for (const auto& c : st.candidates) EXPECT_TRUE(c.failed);
  }
  EXPECT_EQ(serialize_scene(traj.final_scene), serialize_scene(room));
}

TEST(Remote, RemoteScorerDrivesLoop) {
  mock::Behavior b;
  b.action_texts = {"set_material(\"floors\", \"red brick\")"};
  b.score = 0.5;
  mock::Server server(b);
  server.start();
  RemotePolicy policy(fast_options(server.endpoint()));
  RemoteScorer scorer(fast_options(server.endpoint()), &fixtures::demo_assets());
  SceneLoopConfig config;
  config.steps = 1;
  config.candidates = 1;
  config.render = false;
  const auto traj = run_scene_loop(fixtures::demo_room(), "a room", policy, scorer, demo_ctx(), {}, config);
  // Equal score still commits.
  EXPECT_TRUE(traj.steps[0].committed);
  EXPECT_EQ(traj.final_scene.elements.at("floor").material->resolved_id, "brick");
  int scores = 0;
  for (const auto& r : server.requests()) scores += r.contains("scene_summary") && !r.contains("step") ? 1 : 0;
  EXPECT_EQ(scores, 2);
}
