#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sovc/annotate/similarity.hpp"
#include "sovc/data/types.hpp"

namespace sovc::annotate {

struct Detection {
  int frame_index = 0;
  data::BBox bbox;
  std::string class_label;
  double confidence = 0.0;
};

struct SubjectCandidate {
  std::string subject_word;
  Detection detection;
  double similarity = 0.0;
};

/// One candidate per detection, ordered by similarity desc, confidence desc,
/// frame_index asc; remaining ties fall back to bbox then label so the order
/// is total. An empty result signals that manual annotation is needed.
std::vector<SubjectCandidate> rank_candidates(const std::string& subject_word,
                                              const std::vector<Detection>& detections,
                                              const WordSimilarity& word_sim);

/// Detections grouped by video_id. Input is JSON lines:
/// {"video_id", "frame_index", "bbox": [x,y,w,h], "class_label", "confidence"}.
std::map<std::string, std::vector<Detection>> read_detections_jsonl(const std::filesystem::path& file);

}  // namespace sovc::annotate
