#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scenegen {

/// Lowercases and splits on every non-alphanumeric character.
std::vector<std::string> tokenize(std::string_view text);

struct ScoredId {
  std::string id;
  double score = 0.0;
  bool operator==(const ScoredId&) const = default;
};

/// TF-IDF vector space over a fixed document collection.
///
/// Term frequency is the raw count; inverse document frequency is the smoothed
/// ln((1 + N) / (1 + df)) + 1, so terms absent from the collection still carry
/// weight in a query vector. Scores are cosine similarities in [0, 1].
class TfidfIndex {
 public:
  using SparseVector = std::map<std::string, double>;

  TfidfIndex() = default;

  /// Adds a document; ids are expected to be unique.
  void add(std::string id, std::string_view text);
  std::size_t size() const { return ids_.size(); }

  double idf(const std::string& term) const;
  SparseVector vectorize(std::string_view text) const;
  static double cosine(const SparseVector& a, const SparseVector& b);

  /// Ranked by descending score, ties by ascending id. Documents sharing no
  /// token with the query are omitted.
  std::vector<ScoredId> query(std::string_view text, std::size_t top_k) const;

 private:
  struct Doc {
    std::map<std::string, int> counts;
  };
  SparseVector doc_vector(std::size_t i) const;

  std::vector<std::string> ids_;
  std::vector<Doc> docs_;
  std::unordered_map<std::string, int> df_;
  std::unordered_map<std::string, std::vector<std::size_t>> postings_;
};

}  // namespace scenegen
