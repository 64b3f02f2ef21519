#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovc/annotate/candidates.hpp"
#include "sovc/annotate/subjects.hpp"
#include "sovc/data/types.hpp"

namespace sovc::annotate {

enum class Decision { Accept, Manual, Discard };

struct Correction {
  Decision decision = Decision::Accept;
  int index = 0;                             // Accept
  std::vector<data::SubjectRegion> regions;  // Manual
  std::uint64_t version = 0;                 // bumped by the annotation store on every write
};

/// Keyed by "video_id/subject_id".
using CorrectionFile = std::map<std::string, Correction>;

std::string correction_key(const std::string& video_id, const std::string& subject_id);

Correction correction_from_json(const nlohmann::json& j, const std::string& key = {});
nlohmann::json correction_to_json(const Correction& c);

CorrectionFile read_corrections(const std::filesystem::path& file);
void write_corrections(const CorrectionFile& corrections, const std::filesystem::path& file);

/// Ranked candidates per "video_id/subject_id".
using CandidateTable = std::map<std::string, std::vector<SubjectCandidate>>;

struct MergeReport {
  std::vector<std::string> discarded;      // keys removed by an explicit discard
  std::vector<std::string> needs_manual;   // no correction and no candidates; removed
  std::vector<std::string> empty_videos;   // videos left with zero subjects
};

struct MergeResult {
  data::Dataset dataset;
  MergeReport report;
};

// Applies corrections on top of the automatic candidates. With no entry for a
// subject the top-1 candidate is installed. The result always satisfies the
// dataset invariants (validated before returning). Throws ValidationError
// listing every dangling key, or on an out-of-range accept index.
MergeResult merge_corrections(const data::Dataset& draft, const CandidateTable& candidates,
                              const CorrectionFile& corrections);

/// Full construction pipeline: group raw captions by subject, rank detections
/// per subject, then merge corrections.
struct AnnotationResult {
  MergeResult merged;
  CandidateTable candidates;
  std::map<std::string, std::vector<std::string>> discarded_captions;  // by video_id
};

AnnotationResult annotate_dataset(const data::Dataset& draft,
                                  const std::map<std::string, std::vector<Detection>>& detections,
                                  const CorrectionFile& corrections, const PosTagger& tagger,
                                  const Blacklist& blacklist, const WordSimilarity& word_sim);

}  // namespace sovc::annotate
