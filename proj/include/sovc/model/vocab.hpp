#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sovc::model {

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocabulary();

  /// Tokens seen at least `min_freq` times, ids assigned in sorted token order
  /// after the four specials.
  static Vocabulary build(const std::vector<std::vector<std::string>>& captions, int min_freq = 2);

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(const std::string& token) const;  // kUnk when absent
  const std::string& token(int id) const;
  bool contains(const std::string& token) const { return ids_.contains(token); }

  /// [BOS, w1..wn, EOS]; at most max_len words are kept.
  std::vector<int> encode(const std::vector<std::string>& words, int max_len) const;
  /// Words up to the first EOS; specials are dropped.
  std::vector<std::string> decode(const std::vector<int>& ids) const;

  /// {"tokens": {token: id}, "specials": {"pad": 0, ...}}
  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
};

}  // namespace sovc::model
