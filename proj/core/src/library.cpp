#include "scenegen/library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"

namespace scenegen {

using nlohmann::json;

bool admits(double before, double after, const AdmissionRule& rule) {
  constexpr double kSlack = 1e-9;
  const double gain = after - before;
  const double measure = rule.relative ? gain / std::max(before, rule.epsilon) : gain;
  return measure >= rule.threshold - kSlack;
}

json entry_to_json(const InContextEntry& e) {
  return json{{"prompt", e.prompt},
              {"action_text", e.action_text},
              {"score_before", e.score_before},
              {"score_after", e.score_after}};
}

InContextEntry entry_from_json(const json& j) {
  try {
    return {j.at("prompt").get<std::string>(), j.at("action_text").get<std::string>(),
            j.at("score_before").get<double>(), j.at("score_after").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("malformed library entry: ") + e.what());
  }
}

InContextLibrary InContextLibrary::load(const std::filesystem::path& path) {
  InContextLibrary lib;
  if (!std::filesystem::exists(path)) return lib;
  std::istringstream in(read_text_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lib.add(entry_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kInvalidInput,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lib;
}

bool InContextLibrary::contains(const std::string& prompt, const std::string& action_text) const {
  return keys_.contains({prompt, action_text});
}

bool InContextLibrary::add(InContextEntry entry) {
  if (!keys_.insert({entry.prompt, entry.action_text}).second) return false;
  entries_.push_back(std::move(entry));
  return true;
}

std::vector<InContextEntry> admissible_entries(const std::filesystem::path& trajectory_jsonl,
                                               const AdmissionRule& rule) {
  std::vector<InContextEntry> out;
  std::istringstream in(read_text_file(trajectory_jsonl));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json step;
    try {
      step = json::parse(line);
      if (!step.at("committed").get<bool>()) continue;
      const auto chosen = step.at("chosen_index").get<std::size_t>();
      InContextEntry e{step.at("prompt").get<std::string>(),
                       step.at("candidates").at(chosen).at("action_text").get<std::string>(),
                       step.at("score_before").get<double>(), step.at("committed_score").get<double>()};
      if (admits(e.score_before, e.score_after, rule)) out.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kInvalidInput, trajectory_jsonl.string() + ": " + e.what());
    }
  }
  return out;
}

std::size_t update_library(InContextLibrary& library, const std::vector<InContextEntry>& candidates,
                           const std::filesystem::path& file) {
  std::string appended;
  std::size_t added = 0;
  for (const auto& e : candidates) {
    if (!library.add(e)) continue;
    appended += entry_to_json(e).dump() + "\n";
    ++added;
  }
  if (!appended.empty()) append_text_file(file, appended);
  return added;
}

}  // namespace scenegen
