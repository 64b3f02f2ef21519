#include "sovc/data/types.hpp"

#include "sovc/common/error.hpp"

namespace sovc::data {

const SubjectSample* VideoRecord::find_subject(std::string_view subject_id) const {
  for (const auto& s : subjects)
    if (s.subject_id == subject_id) return &s;
  return nullptr;
}

std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw ParseError("unknown split '" + std::string(s) + "'", "split");
}

const VideoRecord* Dataset::find_video(std::string_view video_id) const {
  for (const auto& v : videos)
    if (v.video_id == video_id) return &v;
  return nullptr;
}

std::filesystem::path Dataset::resolve(const VideoRecord& v) const {
  std::filesystem::path p(v.frame_source);
  if (p.is_absolute() || root.empty()) return p;
  return root / p;
}

}  // namespace sovc::data
