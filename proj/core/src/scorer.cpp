#include "scenegen/scorer.hpp"

#include "scenegen/asset_index.hpp"

namespace scenegen {

std::string LexicalScorer::scene_text(const Scene& scene) const {
  std::string text;
  const auto append = [&](const std::string& s) {
    if (s.empty()) return;
    if (!text.empty()) text += ' ';
    text += s;
  };
  for (const auto& [id, e] : scene.elements) {
    if (e.material) append(e.material->description);
    if (e.asset_ref.empty()) continue;
    const AssetRecord* r = assets_ ? assets_->find(e.asset_ref) : nullptr;
    if (r) {
      append(r->description);
    } else if (auto it = e.metadata.find("description"); it != e.metadata.end()) {
      append(it->second);
    }
  }
  for (const auto& [id, l] : scene.lights) append(std::string(to_string(l.kind)));
  return text;
}

TfidfIndex::SparseVector LexicalScorer::vectorize(const std::string& text) const {
  if (corpus_) return corpus_->vectorize(text);
  TfidfIndex::SparseVector v;
  for (auto& t : tokenize(text)) v[t] += 1.0;
  return v;
}

double LexicalScorer::score(const Scene& scene, const std::string& prompt) const {
  return TfidfIndex::cosine(vectorize(prompt), vectorize(scene_text(scene)));
}

}  // namespace scenegen
