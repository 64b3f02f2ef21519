#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovc/data/types.hpp"
#include "sovc/metrics/scores.hpp"

namespace sovc::metrics {

struct PairScores {
  std::string id;
  double bleu4 = 0;  // sentence-level, debug only
  double meteor = 0;
  double rouge_l = 0;
  double cider_d = 0;
  bool subject_correct = false;
};

struct EvalReport {
  double bleu4 = 0;
  double meteor = 0;
  double rouge_l = 0;
  double cider_d = 0;
  double subject_accuracy = 0;
  bool cider_degenerate = false;
  std::vector<PairScores> per_pair;
};

EvalReport evaluate(std::span<const EvalPair> pairs, const annotate::PosTagger& tagger,
                    const annotate::Blacklist& blacklist, const MeteorOptions& meteor = {});

/// Keys are emitted in sorted order so reports diff cleanly.
nlohmann::json report_to_json(const EvalReport& r);

/// JSON lines {"id": ..., "caption": ...}. Duplicate ids are rejected.
std::map<std::string, std::string> read_predictions_jsonl(const std::filesystem::path& path);

/// Sample key used in prediction files: "<video_id>/<subject_id>".
std::string sample_key(const std::string& video_id, const std::string& subject_id);

/// One pair per subject sample with at least one caption. References are the
/// sample's captions; the ground-truth subject set is the subject word plus
/// the heads extracted from those captions. Every such sample needs a
/// prediction and every prediction must name a sample.
std::vector<EvalPair> build_eval_pairs(const data::Dataset& ds,
                                       const std::map<std::string, std::string>& predictions,
                                       const annotate::PosTagger& tagger,
                                       const annotate::Blacklist& blacklist);

}  // namespace sovc::metrics
