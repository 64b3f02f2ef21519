#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

namespace sovc::annotate {

/// Similarity between a detector label and a subject word, in [-1, 1].
class WordSimilarity {
 public:
  virtual ~WordSimilarity() = default;
  virtual double similarity(const std::string& a, const std::string& b) const = 0;
};

/// 1 if equal, else 0.
class ExactMatchSimilarity : public WordSimilarity {
 public:
  double similarity(const std::string& a, const std::string& b) const override {
    return a == b ? 1.0 : 0.0;
  }
};

// Cosine between character-trigram count vectors of "#word#". Pairs listed
// in the synonym table (in either order) score 1.
class TrigramSimilarity : public WordSimilarity {
 public:
  TrigramSimilarity() = default;
  explicit TrigramSimilarity(std::set<std::pair<std::string, std::string>> synonyms)
      : synonyms_(std::move(synonyms)) {}

  double similarity(const std::string& a, const std::string& b) const override;

  static std::map<std::string, int> trigrams(const std::string& word);

 private:
  std::set<std::pair<std::string, std::string>> synonyms_;
};

}  // namespace sovc::annotate
