#include "sovc/data/dataset_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sovc/common/error.hpp"

namespace sovc::data {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(where + ": missing field '" + key + "'", key);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "' has wrong type (" + e.what() + ")", key);
  }
}

BBox bbox_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4)
    throw ParseError(where + ": bbox must be [x, y, w, h]", "bbox");
  for (const auto& v : j)
    if (!v.is_number_integer()) throw ParseError(where + ": bbox entries must be integers", "bbox");
  return BBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

SubjectSample subject_from_json(const json& j, const std::string& video_id) {
  std::string where = "video '" + video_id + "'";
  SubjectSample s;
  s.subject_id = get_field<std::string>(j, "subject_id", where + " subject");
  where += " subject '" + s.subject_id + "'";
  s.subject_word = get_field<std::string>(j, "subject_word", where);
  for (const auto& r : get_field<json>(j, "regions", where)) {
    SubjectRegion region;
    region.frame_index = get_field<int>(r, "frame_index", where + " region");
    region.bbox = bbox_from_json(get_field<json>(r, "bbox", where + " region"), where);
    s.regions.push_back(region);
  }
  s.captions = get_field<std::vector<std::string>>(j, "captions", where);
  return s;
}

VideoRecord video_from_json(const json& j) {
  VideoRecord v;
  v.video_id = get_field<std::string>(j, "video_id", "video");
  const std::string where = "video '" + v.video_id + "'";
  v.frame_source = get_field<std::string>(j, "frame_source", where);
  v.num_frames = get_field<int>(j, "num_frames", where);
  v.width = get_field<int>(j, "width", where);
  v.height = get_field<int>(j, "height", where);
  for (const auto& s : get_field<json>(j, "subjects", where))
    v.subjects.push_back(subject_from_json(s, v.video_id));
  if (j.contains("raw_captions"))
    v.raw_captions = get_field<std::vector<std::string>>(j, "raw_captions", where);
  return v;
}

}  // namespace

void validate_dataset(const Dataset& ds, const LoadOptions& opts) {
  std::set<std::string> ids;
  for (const auto& v : ds.videos) {
    const std::string where = "video '" + v.video_id + "'";
    if (v.video_id.empty()) throw ValidationError("empty video_id", "video_id");
    if (!ids.insert(v.video_id).second)
      throw ValidationError(where + ": duplicate video_id", "video_id");
    if (v.num_frames < 1) throw ValidationError(where + ": num_frames must be >= 1", "num_frames");
    if (v.width < 1 || v.height < 1)
      throw ValidationError(where + ": width and height must be >= 1", "width");
    std::set<std::string> subject_ids;
    for (const auto& s : v.subjects) {
      const std::string swhere = where + " subject '" + s.subject_id + "'";
      if (!subject_ids.insert(s.subject_id).second)
        throw ValidationError(swhere + ": duplicate subject_id", "subject_id");
      if (s.subject_word.empty())
        throw ValidationError(swhere + ": empty subject_word", "subject_word");
      if (s.regions.empty() && !opts.allow_unannotated)
        throw ValidationError(swhere + ": no regions", "regions");
      if (s.captions.empty()) throw ValidationError(swhere + ": no captions", "captions");
      for (const auto& r : s.regions) {
        if (r.frame_index < 0 || r.frame_index >= v.num_frames)
          throw ValidationError(swhere + ": frame_index " + std::to_string(r.frame_index) +
                                    " outside [0, " + std::to_string(v.num_frames) + ")",
                                "frame_index");
        if (!r.bbox.fits(v.width, v.height)) {
          std::ostringstream os;
          os << swhere << ": bbox [" << r.bbox.x << ", " << r.bbox.y << ", " << r.bbox.w << ", "
             << r.bbox.h << "] does not fit a " << v.width << "x" << v.height << " frame";
          throw ValidationError(os.str(), "bbox");
        }
      }
    }
    if (opts.check_frames && !std::filesystem::exists(ds.resolve(v)))
      throw ValidationError(where + ": frame source '" + ds.resolve(v).string() + "' not found",
                            "frame_source");
  }
}

Dataset dataset_from_json(const json& j, const LoadOptions& /*opts*/) {
  if (!j.is_object()) throw ParseError("annotations root must be an object");
  const int version = get_field<int>(j, "format_version", "annotations");
  if (version != kFormatVersion)
    throw ParseError("unsupported format_version " + std::to_string(version), "format_version");
  Dataset ds;
  ds.split = split_from_string(get_field<std::string>(j, "split", "annotations"));
  const auto& videos = get_field<json>(j, "videos", "annotations");
  if (!videos.is_array()) throw ParseError("'videos' must be an array", "videos");
  for (const auto& v : videos) ds.videos.push_back(video_from_json(v));
  return ds;
}

json dataset_to_json(const Dataset& ds) {
  json videos = json::array();
  for (const auto& v : ds.videos) {
    json subjects = json::array();
    for (const auto& s : v.subjects) {
      json regions = json::array();
      for (const auto& r : s.regions)
        regions.push_back({{"frame_index", r.frame_index},
                           {"bbox", {r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h}}});
      subjects.push_back({{"subject_id", s.subject_id},
                          {"subject_word", s.subject_word},
                          {"regions", regions},
                          {"captions", s.captions}});
    }
    json jv = {{"video_id", v.video_id}, {"frame_source", v.frame_source},
               {"num_frames", v.num_frames}, {"width", v.width},
               {"height", v.height}, {"subjects", subjects}};
    if (!v.raw_captions.empty()) jv["raw_captions"] = v.raw_captions;
    videos.push_back(std::move(jv));
  }
  return {{"format_version", kFormatVersion}, {"split", to_string(ds.split)}, {"videos", videos}};
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
  std::filesystem::path file = path;
  if (std::filesystem::is_directory(path)) file = path / kAnnotationsFile;
  std::ifstream in(file);
  if (!in) throw InputError("cannot open dataset annotations '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  Dataset ds = dataset_from_json(j, opts);
  ds.root = file.parent_path();
  validate_dataset(ds, opts);
  return ds;
}

std::string canonical_json(const Dataset& ds) { return dataset_to_json(ds).dump(2) + "\n"; }

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kAnnotationsFile, std::ios::binary);
  if (!out) throw Error("cannot write '" + (dir / kAnnotationsFile).string() + "'");
  out << canonical_json(ds);
}

}  // namespace sovc::data
