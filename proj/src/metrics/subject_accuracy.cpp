#include <set>

#include "sovc/common/text.hpp"
#include "sovc/metrics/scores.hpp"
#include "sovc/metrics/stemmer.hpp"

namespace sovc::metrics {

bool subject_correct(const EvalPair& pair, const annotate::PosTagger& tagger,
                     const annotate::Blacklist& blacklist) {
  if (pair.candidate.empty()) return false;
  std::vector<std::string> heads;
  try {
    heads = annotate::extract_subjects(join(pair.candidate), tagger, blacklist);
  } catch (const std::exception&) {
    return false;
  }
  if (heads.empty()) return false;
  std::set<std::string> gt;
  for (const auto& w : pair.gt_subject_words) gt.insert(porter_stem(w));
  return gt.contains(porter_stem(heads.front()));
}

double subject_accuracy(std::span<const EvalPair> pairs, const annotate::PosTagger& tagger,
                        const annotate::Blacklist& blacklist) {
  check_pairs(pairs);
  std::size_t correct = 0;
  for (const auto& p : pairs) correct += subject_correct(p, tagger, blacklist);
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

}  // namespace sovc::metrics
