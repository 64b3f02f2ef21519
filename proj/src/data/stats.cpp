#include "sovc/data/stats.hpp"

#include <set>

namespace sovc::data {

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  std::map<int, std::pair<std::int64_t, std::int64_t>> by_count;  // captions, subjects
  for (const auto& v : ds.videos) {
    std::set<int> frames;
    std::int64_t video_captions = 0;
    for (const auto& s : v.subjects) {
      ++st.num_subject_samples;
      st.num_regions += static_cast<std::int64_t>(s.regions.size());
      for (const auto& r : s.regions) frames.insert(r.frame_index);
      video_captions += static_cast<std::int64_t>(s.captions.size());
      ++st.subject_word_frequencies[s.subject_word];
    }
    st.num_annotated_frames += static_cast<std::int64_t>(frames.size());
    st.num_captions += video_captions;
    if (!v.subjects.empty()) {
      auto& acc = by_count[static_cast<int>(v.subjects.size())];
      acc.first += video_captions;
      acc.second += static_cast<std::int64_t>(v.subjects.size());
    }
  }
  for (const auto& [k, acc] : by_count)
    st.captions_per_subject_count[k] = static_cast<double>(acc.first) / static_cast<double>(acc.second);
  return st;
}

nlohmann::json stats_to_json(const DatasetStats& s) {
  nlohmann::json per_count = nlohmann::json::object();
  for (const auto& [k, v] : s.captions_per_subject_count) per_count[std::to_string(k)] = v;
  return {{"num_subject_samples", s.num_subject_samples},
          {"num_regions", s.num_regions},
          {"num_annotated_frames", s.num_annotated_frames},
          {"num_captions", s.num_captions},
          {"captions_per_subject_count", per_count},
          {"subject_word_frequencies", s.subject_word_frequencies}};
}

}  // namespace sovc::data
