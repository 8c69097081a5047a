#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenegen {

struct InContextEntry {
  std::string prompt;
  std::string action_text;
  double score_before = 0.0;
  double score_after = 0.0;
  bool operator==(const InContextEntry&) const = default;
};

struct AdmissionRule {
  double threshold = 0.10;
  bool relative = true;  // false: plain difference after - before
  double epsilon = 1e-6;
};

/// True when the step improved the score by at least the threshold. A 1e-9
/// slack absorbs rounding so that an exact 10% step is admitted.
bool admits(double before, double after, const AdmissionRule& rule = {});

/// Prompt/action pairs that improved a scene, persisted as append-only JSONL.
class InContextLibrary {
 public:
  InContextLibrary() = default;

  /// Loads a library file (missing file = empty); duplicate pairs keep the first.
  static InContextLibrary load(const std::filesystem::path& path);

  /// Adds an entry unless its (prompt, action_text) pair is present.
  bool add(InContextEntry entry);
  bool contains(const std::string& prompt, const std::string& action_text) const;

  const std::vector<InContextEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<InContextEntry> entries_;
  std::set<std::pair<std::string, std::string>> keys_;
};

nlohmann::json entry_to_json(const InContextEntry& e);
InContextEntry entry_from_json(const nlohmann::json& j);

/// Admissible steps of a run's trajectory log (committed steps only).
std::vector<InContextEntry> admissible_entries(const std::filesystem::path& trajectory_jsonl,
                                               const AdmissionRule& rule = {});

/// Adds admissible entries to `library` and appends the new ones to `file`.
/// Returns the number of entries added.
std::size_t update_library(InContextLibrary& library, const std::vector<InContextEntry>& candidates,
                           const std::filesystem::path& file);

}  // namespace scenegen
