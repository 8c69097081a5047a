#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "mock_server.hpp"
#include "scenegen/io.hpp"
#include "scenegen/policy.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock policy/scorer service for offline testing"};
  int port = 8765;
  std::string action_file;
  scenegen::mock::Behavior behavior;
  app.add_option("--port", port, "Port to listen on (0 = any)");
  app.add_option("--actions", action_file, "Scripted policy file; blocks are served by sample index");
  app.add_option("--fail-first", behavior.fail_first, "Answer the first N requests with HTTP 500");
  app.add_flag("--always-fail", behavior.always_fail, "Answer every request with HTTP 500");
  app.add_option("--score", behavior.score, "Score returned by /score");
  app.add_option("--description", behavior.description, "Description returned by /place");
  app.add_option("--pixel-u", behavior.pixel_u, "Pixel column returned by /place");
  app.add_option("--pixel-v", behavior.pixel_v, "Pixel row returned by /place");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!action_file.empty()) behavior.action_texts = scenegen::ScriptedPolicy::load(action_file).blocks();
    scenegen::mock::Server server(behavior);
    const int bound = server.start(port);
    std::cout << "listening on http://127.0.0.1:" << bound << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "scenegen-mock-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
