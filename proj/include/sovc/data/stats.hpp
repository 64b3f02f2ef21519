#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "sovc/data/types.hpp"

namespace sovc::data {

struct DatasetStats {
  std::int64_t num_subject_samples = 0;
  std::int64_t num_regions = 0;
  // Distinct (video, frame_index) pairs carrying at least one region.
  std::int64_t num_annotated_frames = 0;
  std::int64_t num_captions = 0;
  // subjects-in-video -> total captions / total subjects over those videos
  std::map<int, double> captions_per_subject_count;
  // subject_word -> number of subject samples using it
  std::map<std::string, std::int64_t> subject_word_frequencies;
};

DatasetStats dataset_stats(const Dataset& ds);

nlohmann::json stats_to_json(const DatasetStats& s);

}  // namespace sovc::data
