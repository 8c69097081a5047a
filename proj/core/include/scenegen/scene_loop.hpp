#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenegen/interpreter.hpp"
#include "scenegen/library.hpp"
#include "scenegen/policy.hpp"
#include "scenegen/render.hpp"
#include "scenegen/scorer.hpp"

namespace scenegen {

struct SceneLoopConfig {
  int steps = 10;
  int candidates = 4;
  std::uint64_t seed = 0;
  std::size_t in_context_k = 2;
  ViewOptions views;
  bool render = true;    // render the standard view set each step
  bool parallel = true;  // run candidates concurrently
};

struct CandidateRecord {
  std::string action_text;
  double score = 0.0;
  bool failed = false;  // backend, parse or execution failure; scored as neutral
  std::string error;
  std::vector<StatementOutcome> outcomes;
  std::vector<std::size_t> in_context;  // library entry indices shown to the policy
};

struct StepRecord {
  int step = 0;
  double score_before = 0.0;
  std::vector<CandidateRecord> candidates;
  int chosen_index = 0;
  bool committed = false;
  double committed_score = 0.0;
  nlohmann::json scene_summary;  // of the scene the policy saw
  std::string views_path;        // relative to the run directory, empty when not written
  std::string scene_path;
};

struct Trajectory {
  std::string prompt;
  double initial_score = 0.0;
  std::vector<StepRecord> steps;
  Scene final_scene;

  double final_score() const { return steps.empty() ? initial_score : steps.back().committed_score; }
};

/// Index with the highest score; ties go to the lowest index.
std::size_t argmax_lowest(const std::vector<double>& scores);

/// Best-of-N refinement: each step samples N candidate programs, executes each
/// on a copy of the current scene, scores it, and commits the best only when it
/// succeeded and does not lower the score. When out_dir is given, per-step
/// views and scenes plus trajectory.jsonl and summary.json are written there.
Trajectory run_scene_loop(const Scene& scene0, const std::string& prompt, PolicyBackend& policy, const Scorer& scorer,
                          const ExecutionContext& ctx, const std::vector<InContextEntry>& library,
                          const SceneLoopConfig& config, const std::filesystem::path* out_dir = nullptr);

nlohmann::json step_to_json(const std::string& prompt, const StepRecord& step);

}  // namespace scenegen
