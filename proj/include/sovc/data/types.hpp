#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sovc::data {

/// Axis-aligned box in pixel units: top-left origin, exclusive right/bottom
/// edge at x+w / y+h.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool fits(int frame_width, int frame_height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= frame_width &&
           y + h <= frame_height;
  }
  auto operator<=>(const BBox&) const = default;
};

struct SubjectRegion {
  int frame_index = 0;
  BBox bbox;
  auto operator<=>(const SubjectRegion&) const = default;
};

struct SubjectSample {
  std::string subject_id;
  std::string subject_word;
  std::vector<SubjectRegion> regions;
  std::vector<std::string> captions;
};

struct VideoRecord {
  std::string video_id;
  std::string frame_source;  // relative to the dataset root unless absolute
  int num_frames = 0;
  int width = 0;
  int height = 0;
  std::vector<SubjectSample> subjects;
  // Captions not yet grouped by subject; only present in draft datasets fed
  // to the annotation pipeline.
  std::vector<std::string> raw_captions;

  const SubjectSample* find_subject(std::string_view subject_id) const;
};

enum class Split { Train, Val, Test };

std::string to_string(Split s);
Split split_from_string(std::string_view s);

struct Dataset {
  Split split = Split::Train;
  std::vector<VideoRecord> videos;
  std::filesystem::path root;  // directory holding annotations.json; not serialized

  const VideoRecord* find_video(std::string_view video_id) const;
  std::filesystem::path resolve(const VideoRecord& v) const;
};

}  // namespace sovc::data
