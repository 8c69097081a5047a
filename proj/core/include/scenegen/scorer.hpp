#pragma once

#include <string>

#include "scenegen/scene.hpp"
#include "scenegen/text_index.hpp"

namespace scenegen {

class AssetIndex;

/// Prompt/scene alignment in [0, 1]. Implementations must be deterministic and
/// safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const Scene& scene, const std::string& prompt) const = 0;
};

/// Cosine between the prompt and the scene's words: material descriptions,
/// asset descriptions and light kinds. Term weights use the idf of `corpus`
/// when given, otherwise raw counts.
class LexicalScorer final : public Scorer {
 public:
  explicit LexicalScorer(const AssetIndex* assets = nullptr, const TfidfIndex* corpus = nullptr)
      : assets_(assets), corpus_(corpus) {}

  double score(const Scene& scene, const std::string& prompt) const override;

  /// The text the scene is scored by.
  std::string scene_text(const Scene& scene) const;

 private:
  TfidfIndex::SparseVector vectorize(const std::string& text) const;

  const AssetIndex* assets_;
  const TfidfIndex* corpus_;
};

}  // namespace scenegen
