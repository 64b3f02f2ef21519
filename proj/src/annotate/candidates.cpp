#include "sovc/annotate/candidates.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "sovc/common/error.hpp"

namespace sovc::annotate {

std::vector<SubjectCandidate> rank_candidates(const std::string& subject_word,
                                              const std::vector<Detection>& detections,
                                              const WordSimilarity& word_sim) {
  std::vector<SubjectCandidate> out;
  out.reserve(detections.size());
  for (const auto& d : detections) {
    const double s = word_sim.similarity(subject_word, d.class_label);
    if (!(s >= -1.0 - 1e-12 && s <= 1.0 + 1e-12))
      throw ContractError("word similarity outside [-1, 1] for '" + d.class_label + "'");
    out.push_back({subject_word, d, std::clamp(s, -1.0, 1.0)});
  }
  std::sort(out.begin(), out.end(), [](const SubjectCandidate& a, const SubjectCandidate& b) {
    const auto& da = a.detection;
    const auto& db = b.detection;
    return std::tie(b.similarity, db.confidence, da.frame_index, da.bbox, da.class_label) <
           std::tie(a.similarity, da.confidence, db.frame_index, db.bbox, db.class_label);
  });
  return out;
}

std::map<std::string, std::vector<Detection>> read_detections_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open detections '" + file.string() + "'");
  std::map<std::string, std::vector<Detection>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = file.string() + ":" + std::to_string(line_no);
    try {
      auto j = nlohmann::json::parse(line);
      Detection d;
      d.frame_index = j.at("frame_index").get<int>();
      const auto& b = j.at("bbox");
      if (!b.is_array() || b.size() != 4) throw ParseError(where + ": bbox must be [x, y, w, h]", "bbox");
      d.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      d.class_label = j.at("class_label").get<std::string>();
      std::transform(d.class_label.begin(), d.class_label.end(), d.class_label.begin(), ::tolower);
      d.confidence = j.at("confidence").get<double>();
      if (d.confidence < 0.0 || d.confidence > 1.0)
        throw ValidationError(where + ": confidence outside [0, 1]", "confidence");
      out[j.at("video_id").get<std::string>()].push_back(d);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sovc::annotate
