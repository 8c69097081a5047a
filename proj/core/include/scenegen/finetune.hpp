#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenegen {

/// A scene-loop run directory as written by run_scene_loop.
struct RunRecord {
  std::string run_id;  // directory name
  std::string prompt;
  double final_score = 0.0;
  std::vector<nlohmann::json> steps;  // trajectory.jsonl lines
};

/// Loads one run directory (summary.json + trajectory.jsonl).
RunRecord load_run(const std::filesystem::path& dir);

/// Every immediate subdirectory of `root` holding a trajectory.jsonl, sorted by run id.
std::vector<RunRecord> load_runs(const std::filesystem::path& root);

/// Per prompt, keeps the top_k runs by final score (ties: lower run id) and
/// emits one record per committed step: {prompt, step, views, scene_summary,
/// action_text}. View paths are prefixed with the run id.
std::vector<nlohmann::json> collect_selfimprovement(const std::vector<RunRecord>& runs, std::size_t top_k);

}  // namespace scenegen
