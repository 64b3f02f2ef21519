#include "sovc/metrics/report.hpp"

#include <fstream>

#include "sovc/common/error.hpp"
#include "sovc/common/text.hpp"

namespace sovc::metrics {

using nlohmann::json;

EvalReport evaluate(std::span<const EvalPair> pairs, const annotate::PosTagger& tagger,
                    const annotate::Blacklist& blacklist, const MeteorOptions& meteor) {
  check_pairs(pairs);
  EvalReport r;
  r.bleu4 = bleu4(pairs);
  r.rouge_l = rouge_l(pairs);
  r.meteor = meteor_lite(pairs, meteor);
  auto cider = cider_d(pairs);
  r.cider_d = cider.score;
  r.cider_degenerate = cider.degenerate;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    PairScores s;
    s.id = p.id;
    s.bleu4 = sentence_bleu4(p.candidate, p.references);
    s.meteor = meteor_pair(p.candidate, p.references, meteor);
    s.rouge_l = rouge_l_pair(p.candidate, p.references);
    s.cider_d = cider.per_pair[i];
    s.subject_correct = subject_correct(p, tagger, blacklist);
    correct += s.subject_correct;
    r.per_pair.push_back(std::move(s));
  }
  r.subject_accuracy = static_cast<double>(correct) / static_cast<double>(pairs.size());
  return r;
}

json report_to_json(const EvalReport& r) {
  json per = json::object();
  for (const auto& s : r.per_pair)
    per[s.id] = {{"bleu4", s.bleu4},
                 {"cider_d", s.cider_d},
                 {"meteor", s.meteor},
                 {"rouge_l", s.rouge_l},
                 {"subject_correct", s.subject_correct}};
  return {{"bleu4", r.bleu4},
          {"cider_d", r.cider_d},
          {"cider_degenerate", r.cider_degenerate},
          {"meteor", r.meteor},
          {"num_pairs", r.per_pair.size()},
          {"per_pair", per},
          {"rouge_l", r.rouge_l},
          {"subject_accuracy", r.subject_accuracy}};
}

std::map<std::string, std::string> read_predictions_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open predictions file " + path.string(), "preds");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = path.string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("caption") || !j["id"].is_string() ||
        !j["caption"].is_string())
      throw ParseError(where + ": expected {\"id\": string, \"caption\": string}");
    auto id = j["id"].get<std::string>();
    if (!out.emplace(id, j["caption"].get<std::string>()).second)
      throw ValidationError(where + ": duplicate prediction id " + id, "id");
  }
  return out;
}

std::string sample_key(const std::string& video_id, const std::string& subject_id) {
  return video_id + "/" + subject_id;
}

std::vector<EvalPair> build_eval_pairs(const data::Dataset& ds,
                                       const std::map<std::string, std::string>& predictions,
                                       const annotate::PosTagger& tagger,
                                       const annotate::Blacklist& blacklist) {
  std::vector<EvalPair> pairs;
  std::vector<std::string> missing;
  std::set<std::string> known;
  for (const auto& v : ds.videos)
    for (const auto& s : v.subjects) {
      if (s.captions.empty()) continue;
      auto key = sample_key(v.video_id, s.subject_id);
      known.insert(key);
      auto it = predictions.find(key);
      if (it == predictions.end()) {
        missing.push_back(key);
        continue;
      }
      EvalPair p;
      p.id = key;
      p.candidate = tokenize_caption(it->second);
      p.gt_subject_words.insert(s.subject_word);
      for (const auto& c : s.captions) {
        p.references.push_back(tokenize_caption(c));
        try {
          for (auto& h : annotate::extract_subjects(c, tagger, blacklist))
            p.gt_subject_words.insert(std::move(h));
        } catch (const ContractError&) {
        }
      }
      pairs.push_back(std::move(p));
    }
  auto list = [](const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < 10; ++i) s += (i ? ", " : "") + ids[i];
    if (ids.size() > 10) s += ", ...";
    return s;
  };
  if (!missing.empty())
    throw ValidationError(std::to_string(missing.size()) + " samples have no prediction: " + list(missing), "preds");
  std::vector<std::string> unknown;
  for (const auto& [id, c] : predictions)
    if (!known.contains(id)) unknown.push_back(id);
  if (!unknown.empty())
    throw ValidationError("predictions for unknown samples: " + list(unknown), "preds");
  if (pairs.empty()) throw ValidationError("dataset has no captioned subject samples");
  return pairs;
}

}  // namespace sovc::metrics
