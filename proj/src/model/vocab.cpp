#include "sovc/model/vocab.hpp"

#include "sovc/common/error.hpp"

namespace sovc::model {

using nlohmann::json;

namespace {
const char* const kSpecials[] = {"<pad>", "<bos>", "<eos>", "<unk>"};
}

Vocabulary::Vocabulary() {
  for (const char* s : kSpecials) {
    ids_[s] = static_cast<int>(tokens_.size());
    tokens_.emplace_back(s);
  }
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& captions, int min_freq) {
  std::map<std::string, int> freq;
  for (const auto& c : captions)
    for (const auto& w : c) ++freq[w];
  Vocabulary v;
  for (const auto& [w, n] : freq) {
    if (n < min_freq || v.ids_.contains(w)) continue;
    v.ids_[w] = static_cast<int>(v.tokens_.size());
    v.tokens_.push_back(w);
  }
  return v;
}

int Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw ContractError("vocabulary id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& words, int max_len) const {
  std::vector<int> out{kBos};
  for (std::size_t i = 0; i < words.size() && static_cast<int>(i) < max_len; ++i) out.push_back(id(words[i]));
  out.push_back(kEos);
  return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  for (int i : ids) {
    if (i == kEos) break;
    if (i == kPad || i == kBos) continue;
    out.push_back(token(i));
  }
  return out;
}

json Vocabulary::to_json() const {
  json toks = json::object();
  for (std::size_t i = 4; i < tokens_.size(); ++i) toks[tokens_[i]] = i;
  return {{"tokens", toks}, {"specials", {{"pad", kPad}, {"bos", kBos}, {"eos", kEos}, {"unk", kUnk}}}};
}

Vocabulary Vocabulary::from_json(const json& j) {
  if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_object())
    throw ParseError("vocabulary: expected an object with a 'tokens' map");
  std::map<int, std::string> by_id;
  for (auto it = j["tokens"].begin(); it != j["tokens"].end(); ++it) {
    if (!it.value().is_number_integer()) throw ParseError("vocabulary: id of '" + it.key() + "' is not an integer");
    by_id[it.value().get<int>()] = it.key();
  }
  Vocabulary v;
  for (const auto& [id, tok] : by_id) {
    if (id != v.size()) throw ParseError("vocabulary: ids are not dense from 4");
    if (v.ids_.contains(tok)) throw ParseError("vocabulary: token '" + tok + "' collides with a special");
    v.ids_[tok] = id;
    v.tokens_.push_back(tok);
  }
  return v;
}

}  // namespace sovc::model
