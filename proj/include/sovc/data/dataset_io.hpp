#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sovc/data/types.hpp"

namespace sovc::data {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kAnnotationsFile = "annotations.json";

struct LoadOptions {
  // Require every video's frame bundle to exist on disk.
  bool check_frames = true;
  // Accept subjects with zero regions (draft datasets awaiting annotation).
  bool allow_unannotated = false;
};

/// Loads `<dir>/annotations.json`, or the file itself if `path` names a file.
/// Throws ParseError for schema problems and ValidationError for invariant
/// violations; both messages name the offending video/subject.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

Dataset dataset_from_json(const nlohmann::json& j, const LoadOptions& opts = {});
nlohmann::json dataset_to_json(const Dataset& ds);

/// Throws ValidationError on the first violated invariant.
void validate_dataset(const Dataset& ds, const LoadOptions& opts = {});

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical_json(const Dataset& ds);

/// Writes `<dir>/annotations.json` in canonical form, creating `dir` if needed.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);

}  // namespace sovc::data
