#include "scenegen/finetune.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"

namespace scenegen {

using nlohmann::json;

RunRecord load_run(const std::filesystem::path& dir) {
  RunRecord run;
  run.run_id = dir.filename().string();
  try {
    const json summary = json::parse(read_text_file(dir / "summary.json"));
    run.prompt = summary.at("prompt").get<std::string>();
    run.final_score = summary.at("final_score").get<double>();
    std::istringstream in(read_text_file(dir / "trajectory.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) run.steps.push_back(json::parse(line));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "run " + dir.string() + ": " + e.what());
  }
  return run;
}

std::vector<RunRecord> load_runs(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) throw Error(ErrorKind::kInvalidInput, "not a directory: " + root.string());
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "trajectory.jsonl")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<RunRecord> runs;
  for (const auto& d : dirs) runs.push_back(load_run(d));
  return runs;
}

std::vector<json> collect_selfimprovement(const std::vector<RunRecord>& runs, std::size_t top_k) {
  std::map<std::string, std::vector<const RunRecord*>> by_prompt;
  for (const auto& r : runs) by_prompt[r.prompt].push_back(&r);
  std::vector<json> out;
  for (auto& [prompt, list] : by_prompt) {
    std::sort(list.begin(), list.end(), [](const RunRecord* a, const RunRecord* b) {
      if (a->final_score != b->final_score) return a->final_score > b->final_score;
      return a->run_id < b->run_id;
    });
    if (list.size() > top_k) list.resize(top_k);
    for (const RunRecord* run : list) {
      for (const auto& step : run->steps) {
        if (!step.value("committed", false)) continue;
        const auto chosen = step.at("chosen_index").get<std::size_t>();
        json views = json::array();
        const std::string manifest = step.value("views", "");
        if (!manifest.empty()) views.push_back(run->run_id + "/" + manifest);
        out.push_back(json{{"prompt", prompt},
                           {"run", run->run_id},
                           {"step", step.at("step")},
                           {"views", std::move(views)},
                           {"scene_summary", step.at("scene_summary")},
                           {"action_text", step.at("candidates").at(chosen).at("action_text")}});
      }
    }
  }
  return out;
}

}  // namespace scenegen
