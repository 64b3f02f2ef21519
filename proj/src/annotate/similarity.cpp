#include "sovc/annotate/similarity.hpp"

#include <cmath>

namespace sovc::annotate {

std::map<std::string, int> TrigramSimilarity::trigrams(const std::string& word) {
  const std::string padded = "#" + word + "#";
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[padded.substr(i, 3)];
  return counts;
}

double TrigramSimilarity::similarity(const std::string& a, const std::string& b) const {
  if (a == b) return 1.0;
  if (synonyms_.contains({a, b}) || synonyms_.contains({b, a})) return 1.0;
  const auto ta = trigrams(a);
  const auto tb = trigrams(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [g, c] : ta) {
    na += static_cast<double>(c) * c;
    if (auto it = tb.find(g); it != tb.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [g, c] : tb) nb += static_cast<double>(c) * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace sovc::annotate
