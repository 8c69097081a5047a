#include "scenegen/asset_index.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scenegen/errors.hpp"

namespace scenegen {

using nlohmann::json;

std::string indexed_text(const std::string& description, const std::vector<std::string>& tags) {
  std::string text = description;
  for (const auto& t : tags) {
    text += ' ';
    text += t;
  }
  return text;
}

namespace {

struct ManifestLine {
  int line_no;
  json value;
};

std::vector<ManifestLine> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::vector<ManifestLine> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back({line_no, json::parse(line)});
    } catch (const json::parse_error&) {
      throw ManifestError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
    }
  }
  return out;
}

std::string required_string(const ManifestLine& l, const char* key) {
  if (!l.value.is_object() || !l.value.contains(key) || !l.value[key].is_string()) {
    throw ManifestError("line " + std::to_string(l.line_no) + ": missing string field '" + key + "'");
  }
  return l.value[key].get<std::string>();
}

std::vector<std::string> tags_of(const ManifestLine& l) {
  std::vector<std::string> tags;
  if (!l.value.contains("tags")) return tags;
  const json& t = l.value["tags"];
  if (!t.is_array()) throw ManifestError("line " + std::to_string(l.line_no) + ": tags must be a list");
  for (const auto& tag : t) {
    if (!tag.is_string()) throw ManifestError("line " + std::to_string(l.line_no) + ": tags must be strings");
    tags.push_back(tag.get<std::string>());
  }
  return tags;
}

void check_unique(std::map<std::string, int>& first_line, const std::string& id, int line_no) {
  auto [it, inserted] = first_line.emplace(id, line_no);
  if (!inserted) {
    throw ManifestError("duplicate id \"" + id + "\" at lines " + std::to_string(it->second) + " and " +
                        std::to_string(line_no));
  }
}

}  // namespace

AssetIndex AssetIndex::load(const std::filesystem::path& manifest) {
  const auto base = manifest.parent_path();
  std::vector<AssetRecord> records;
  std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes;
  std::map<std::string, std::shared_ptr<const TriangleMesh>> by_path;
  std::map<std::string, int> first_line;
  for (const auto& l : read_jsonl(manifest)) {
    AssetRecord r;
    r.id = required_string(l, "id");
    check_unique(first_line, r.id, l.line_no);
    r.description = required_string(l, "description");
    r.mesh_path = required_string(l, "mesh_path");
    r.tags = tags_of(l);
    const json& he = l.value.value("half_extents", json());
    if (!he.is_array() || he.size() != 3 || !he[0].is_number() || !he[1].is_number() || !he[2].is_number()) {
      throw ManifestError("line " + std::to_string(l.line_no) + ": half_extents must be a 3-vector");
    }
    r.half_extents = {he[0].get<double>(), he[1].get<double>(), he[2].get<double>()};
    if (!(r.half_extents.x > 0.0 && r.half_extents.y > 0.0 && r.half_extents.z > 0.0)) {
      throw ManifestError("line " + std::to_string(l.line_no) + ": half_extents must be positive");
    }
    if (l.value.contains("receptacle_hint") && l.value["receptacle_hint"].is_boolean()) {
      r.receptacle_hint = l.value["receptacle_hint"].get<bool>();
    }
    auto& cached = by_path[r.mesh_path];
    if (!cached) {
      const auto mesh_file = base / r.mesh_path;
      if (!std::filesystem::exists(mesh_file)) {
        throw ManifestError("line " + std::to_string(l.line_no) + ": missing mesh file " + mesh_file.string());
      }
      try {
        cached = std::make_shared<const TriangleMesh>(load_obj(mesh_file));
      } catch (const Error& e) {
        throw ManifestError("line " + std::to_string(l.line_no) + ": " + e.what());
      }
    }
    meshes[r.id] = cached;
    records.push_back(std::move(r));
  }
  return from_records(std::move(records), std::move(meshes));
}

AssetIndex AssetIndex::from_records(std::vector<AssetRecord> records,
                                    std::map<std::string, std::shared_ptr<const TriangleMesh>> meshes) {
  AssetIndex index;
  index.records_ = std::move(records);
  index.meshes_ = std::move(meshes);
  for (std::size_t i = 0; i < index.records_.size(); ++i) {
    const auto& r = index.records_[i];
    if (!index.by_id_.emplace(r.id, i).second) throw ManifestError("duplicate id \"" + r.id + "\"");
    index.text_.add(r.id, indexed_text(r.description, r.tags));
  }
  return index;
}

const AssetRecord* AssetIndex::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::shared_ptr<const TriangleMesh> AssetIndex::mesh(const std::string& id) const {
  const auto it = meshes_.find(id);
  return it == meshes_.end() ? nullptr : it->second;
}

RetrievalResult AssetIndex::retrieve(std::string_view query, std::size_t top_k) const {
  return text_.query(query, top_k);
}

MaterialIndex MaterialIndex::load(const std::filesystem::path& manifest) {
  std::vector<MaterialRecord> records;
  std::map<std::string, int> first_line;
  for (const auto& l : read_jsonl(manifest)) {
    MaterialRecord r;
    r.id = required_string(l, "id");
    check_unique(first_line, r.id, l.line_no);
    r.description = required_string(l, "description");
    if (r.description.empty()) throw ManifestError("line " + std::to_string(l.line_no) + ": empty description");
    r.tags = tags_of(l);
    records.push_back(std::move(r));
  }
  return from_records(std::move(records));
}

MaterialIndex MaterialIndex::from_records(std::vector<MaterialRecord> records) {
  MaterialIndex index;
  index.records_ = std::move(records);
  for (std::size_t i = 0; i < index.records_.size(); ++i) {
    const auto& r = index.records_[i];
    if (!index.by_id_.emplace(r.id, i).second) throw ManifestError("duplicate id \"" + r.id + "\"");
    index.text_.add(r.id, indexed_text(r.description, r.tags));
  }
  return index;
}

const MaterialRecord* MaterialIndex::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

RetrievalResult MaterialIndex::retrieve(std::string_view query, std::size_t top_k) const {
  return text_.query(query, top_k);
}

}  // namespace scenegen
