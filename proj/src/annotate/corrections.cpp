#include "sovc/annotate/corrections.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sovc/common/error.hpp"
#include "sovc/data/dataset_io.hpp"

namespace sovc::annotate {

using nlohmann::json;

std::string correction_key(const std::string& video_id, const std::string& subject_id) {
  return video_id + "/" + subject_id;
}

namespace {

data::SubjectRegion region_from_json(const json& j, const std::string& key) {
  if (!j.contains("frame_index") || !j.contains("bbox"))
    throw ParseError("correction '" + key + "': manual region needs frame_index and bbox", "bbox");
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4)
    throw ParseError("correction '" + key + "': bbox must be [x, y, w, h]", "bbox");
  return {j.at("frame_index").get<int>(),
          {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()}};
}

}  // namespace

Correction correction_from_json(const json& j, const std::string& key) {
  try {
    Correction c;
    const auto decision = j.at("decision").get<std::string>();
    if (decision == "accept") {
      c.decision = Decision::Accept;
      c.index = j.value("index", 0);
    } else if (decision == "manual") {
      c.decision = Decision::Manual;
      if (j.contains("regions")) {
        for (const auto& r : j.at("regions")) c.regions.push_back(region_from_json(r, key));
      } else {
        c.regions.push_back(region_from_json(j, key));
      }
      if (c.regions.empty()) throw ParseError("correction '" + key + "': manual decision without regions", "regions");
    } else if (decision == "discard") {
      c.decision = Decision::Discard;
    } else {
      throw ParseError("correction '" + key + "': unknown decision '" + decision + "'", "decision");
    }
    c.version = j.value("version", std::uint64_t{0});
    return c;
  } catch (const json::exception& e) {
    throw ParseError("correction '" + key + "': " + e.what(), "decision");
  }
}

json correction_to_json(const Correction& c) {
  json j;
  switch (c.decision) {
    case Decision::Accept:
      j = {{"decision", "accept"}, {"index", c.index}};
      break;
    case Decision::Manual: {
      json regions = json::array();
      for (const auto& r : c.regions)
        regions.push_back({{"frame_index", r.frame_index}, {"bbox", {r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h}}});
      j = {{"decision", "manual"}, {"regions", regions}};
      break;
    }
    case Decision::Discard:
      j = {{"decision", "discard"}};
      break;
  }
  if (c.version) j["version"] = c.version;
  return j;
}

CorrectionFile read_corrections(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open corrections '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(file.string() + ": corrections must be a JSON object");
  CorrectionFile out;
  for (const auto& [key, value] : j.items()) out[key] = correction_from_json(value, key);
  return out;
}

void write_corrections(const CorrectionFile& corrections, const std::filesystem::path& file) {
  json j = json::object();
  for (const auto& [key, c] : corrections) j[key] = correction_to_json(c);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << j.dump(2) << "\n";
}

MergeResult merge_corrections(const data::Dataset& draft, const CandidateTable& candidates,
                              const CorrectionFile& corrections) {
  std::set<std::string> known;
  for (const auto& v : draft.videos)
    for (const auto& s : v.subjects) known.insert(correction_key(v.video_id, s.subject_id));
  std::vector<std::string> dangling;
  for (const auto& [key, c] : corrections)
    if (!known.contains(key)) dangling.push_back(key);
  if (!dangling.empty()) {
    std::string msg = "corrections reference unknown subjects:";
    for (const auto& k : dangling) msg += " " + k;
    throw ValidationError(msg, "corrections");
  }

  static const std::vector<SubjectCandidate> kNone;
  MergeResult result;
  result.dataset.split = draft.split;
  result.dataset.root = draft.root;
  for (const auto& v : draft.videos) {
    data::VideoRecord out = v;
    out.subjects.clear();
    out.raw_captions.clear();
    for (const auto& s : v.subjects) {
      const auto key = correction_key(v.video_id, s.subject_id);
      const auto cit = candidates.find(key);
      const auto& ranked = cit == candidates.end() ? kNone : cit->second;
      data::SubjectSample sample = s;
      const auto corr = corrections.find(key);
      if (corr == corrections.end()) {
        if (!ranked.empty()) {
          sample.regions = {{ranked.front().detection.frame_index, ranked.front().detection.bbox}};
        } else if (s.regions.empty()) {
          result.report.needs_manual.push_back(key);
          continue;
        }
      } else {
        const Correction& c = corr->second;
        switch (c.decision) {
          case Decision::Accept:
            if (c.index < 0 || c.index >= static_cast<int>(ranked.size()))
              throw ValidationError("correction '" + key + "': accept index " + std::to_string(c.index) +
                                        " out of range (" + std::to_string(ranked.size()) + " candidates)",
                                    "index");
            sample.regions = {{ranked[static_cast<std::size_t>(c.index)].detection.frame_index,
                               ranked[static_cast<std::size_t>(c.index)].detection.bbox}};
            break;
          case Decision::Manual:
            sample.regions = c.regions;
            break;
          case Decision::Discard:
            result.report.discarded.push_back(key);
            continue;
        }
      }
      out.subjects.push_back(std::move(sample));
    }
    if (out.subjects.empty()) result.report.empty_videos.push_back(v.video_id);
    result.dataset.videos.push_back(std::move(out));
  }
  data::validate_dataset(result.dataset, {.check_frames = false});
  return result;
}

AnnotationResult annotate_dataset(const data::Dataset& draft,
                                  const std::map<std::string, std::vector<Detection>>& detections,
                                  const CorrectionFile& corrections, const PosTagger& tagger,
                                  const Blacklist& blacklist, const WordSimilarity& word_sim) {
  AnnotationResult result;
  data::Dataset grouped = draft;
  for (auto& v : grouped.videos) {
    if (v.raw_captions.empty()) continue;
    auto g = group_captions_by_subject(v.raw_captions, tagger, blacklist);
    for (auto& s : g.subjects) {
      auto it = std::find_if(v.subjects.begin(), v.subjects.end(),
                             [&](const data::SubjectSample& e) { return e.subject_id == s.subject_id; });
      if (it == v.subjects.end()) {
        v.subjects.push_back(std::move(s));
      } else {
        it->captions.insert(it->captions.end(), s.captions.begin(), s.captions.end());
      }
    }
    if (!g.discarded.empty()) result.discarded_captions[v.video_id] = std::move(g.discarded);
  }
  static const std::vector<Detection> kNone;
  for (const auto& v : grouped.videos) {
    const auto dit = detections.find(v.video_id);
    const auto& dets = dit == detections.end() ? kNone : dit->second;
    for (const auto& s : v.subjects) {
      std::vector<Detection> valid;
      for (const auto& d : dets)
        if (d.frame_index >= 0 && d.frame_index < v.num_frames && d.bbox.fits(v.width, v.height))
          valid.push_back(d);
      result.candidates[correction_key(v.video_id, s.subject_id)] =
          rank_candidates(s.subject_word, valid, word_sim);
    }
  }
  result.merged = merge_corrections(grouped, result.candidates, corrections);
  return result;
}

}  // namespace sovc::annotate
