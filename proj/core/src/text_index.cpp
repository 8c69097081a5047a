#include "scenegen/text_index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace scenegen {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void TfidfIndex::add(std::string id, std::string_view text) {
  Doc doc;
  for (auto& tok : tokenize(text)) ++doc.counts[tok];
  const std::size_t index = docs_.size();
  for (const auto& [term, count] : doc.counts) {
    ++df_[term];
    postings_[term].push_back(index);
  }
  ids_.push_back(std::move(id));
  docs_.push_back(std::move(doc));
}

double TfidfIndex::idf(const std::string& term) const {
  const auto it = df_.find(term);
  const double df = it == df_.end() ? 0.0 : it->second;
  return std::log((1.0 + static_cast<double>(docs_.size())) / (1.0 + df)) + 1.0;
}

TfidfIndex::SparseVector TfidfIndex::vectorize(std::string_view text) const {
  SparseVector v;
  for (const auto& tok : tokenize(text)) v[tok] += 1.0;
  for (auto& [term, w] : v) w *= idf(term);
  return v;
}

TfidfIndex::SparseVector TfidfIndex::doc_vector(std::size_t i) const {
  SparseVector v;
  for (const auto& [term, count] : docs_[i].counts) v[term] = count * idf(term);
  return v;
}

double TfidfIndex::cosine(const SparseVector& a, const SparseVector& b) {
  double num = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [t, w] : a) {
    na += w * w;
    const auto it = b.find(t);
    if (it != b.end()) num += w * it->second;
  }
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(num / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<ScoredId> TfidfIndex::query(std::string_view text, std::size_t top_k) const {
  const SparseVector q = vectorize(text);
  std::set<std::size_t> candidates;
  for (const auto& [term, w] : q) {
    const auto it = postings_.find(term);
    if (it != postings_.end()) candidates.insert(it->second.begin(), it->second.end());
  }
  std::vector<ScoredId> out;
  out.reserve(candidates.size());
  for (auto i : candidates) out.push_back({ids_[i], cosine(q, doc_vector(i))});
  std::sort(out.begin(), out.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

}  // namespace scenegen
