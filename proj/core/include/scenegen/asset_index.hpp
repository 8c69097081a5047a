#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scenegen/mesh.hpp"
#include "scenegen/text_index.hpp"

namespace scenegen {

struct AssetRecord {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
  std::string mesh_path;  // relative to the manifest directory
  Vec3 half_extents;      // canonical pose
  std::optional<bool> receptacle_hint;
};

struct MaterialRecord {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
};

using RetrievalResult = std::vector<ScoredId>;

/// Asset manifest (JSONL) plus its loaded meshes. Immutable after load.
class AssetIndex {
 public:
  AssetIndex() = default;

  /// Throws ManifestError on malformed lines, duplicate ids (citing both line
  /// numbers), non-positive half extents or unreadable mesh files.
  static AssetIndex load(const std::filesystem::path& manifest);

  /// Builds an index from in-memory records and meshes (mesh_path is informational).
  static AssetIndex from_records(std::vector<AssetRecord> records,
                                 std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes);

  std::size_t size() const { return records_.size(); }
  const AssetRecord* find(const std::string& id) const;
  std::shared_ptr<const TriangleMesh> mesh(const std::string& id) const;
  const std::vector<AssetRecord>& records() const { return records_; }
  const TfidfIndex& text() const { return text_; }

  RetrievalResult retrieve(std::string_view query, std::size_t top_k) const;

 private:
  std::vector<AssetRecord> records_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes_;
  TfidfIndex text_;
};

class MaterialIndex {
 public:
  MaterialIndex() = default;

  static MaterialIndex load(const std::filesystem::path& manifest);
  static MaterialIndex from_records(std::vector<MaterialRecord> records);

  std::size_t size() const { return records_.size(); }
  const MaterialRecord* find(const std::string& id) const;
  const std::vector<MaterialRecord>& records() const { return records_; }
  const TfidfIndex& text() const { return text_; }

  RetrievalResult retrieve(std::string_view query, std::size_t top_k) const;

 private:
  std::vector<MaterialRecord> records_;
  std::map<std::string, std::size_t> by_id_;
  TfidfIndex text_;
};

/// Text indexed for a record: description followed by its tags.
std::string indexed_text(const std::string& description, const std::vector<std::string>& tags);

}  // namespace scenegen
