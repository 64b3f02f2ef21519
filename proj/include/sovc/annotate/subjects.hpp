#pragma once

#include <set>
#include <string>
#include <vector>

#include "sovc/annotate/tagger.hpp"
#include "sovc/data/types.hpp"

namespace sovc::annotate {

using Blacklist = std::set<std::string>;

/// {video, clip, footage, scene, screen}
const Blacklist& default_blacklist();

struct SubjectPhrase {
  std::string head;    // lowercase head noun, number preserved
  std::string phrase;  // modifiers + head, determiners dropped ("ice hockey player")
};

// The subject noun phrase is everything before the first verb or auxiliary.
// It is split on conjunctions; each conjunct contributes the head (last
// noun/pronoun) of its first prepositional chunk. A blacklisted head followed
// by "of" hands over to the next chunk ("a video of a dog" -> dog).
std::vector<SubjectPhrase> extract_subject_phrases(const std::string& caption,
                                                   const PosTagger& tagger,
                                                   const Blacklist& blacklist);

/// Heads only. An empty result means the caption is discarded upstream.
/// Throws ContractError on an empty caption.
std::vector<std::string> extract_subjects(const std::string& caption, const PosTagger& tagger,
                                          const Blacklist& blacklist);

struct GroupingResult {
  std::vector<data::SubjectSample> subjects;  // regions left empty
  std::vector<std::string> discarded;         // captions without a usable subject
};

/// Groups a video's raw captions by extracted subject word; subject_id is the
/// word itself. Captions naming several subjects are attached to each.
GroupingResult group_captions_by_subject(const std::vector<std::string>& captions,
                                         const PosTagger& tagger, const Blacklist& blacklist);

}  // namespace sovc::annotate
