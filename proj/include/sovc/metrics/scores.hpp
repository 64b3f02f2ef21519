#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sovc/annotate/subjects.hpp"
#include "sovc/annotate/tagger.hpp"

namespace sovc::metrics {

using Tokens = std::vector<std::string>;

struct EvalPair {
  std::string id;
  Tokens candidate;
  std::vector<Tokens> references;  // at least one
  std::set<std::string> gt_subject_words;
};

/// Throws ValidationError on an empty corpus or a pair without references.
void check_pairs(std::span<const EvalPair> pairs);

/// Corpus BLEU@4, unsmoothed. The reference length of a pair is the reference
/// length closest to the candidate (shorter wins ties). An order with no
/// candidate n-grams or no matches makes the score 0.
double bleu4(std::span<const EvalPair> pairs);

/// Sentence-level BLEU@4 for debugging; log(p + 1e-9) per order.
double sentence_bleu4(const Tokens& candidate, const std::vector<Tokens>& references);

std::size_t lcs_length(const Tokens& a, const Tokens& b);
double rouge_l_pair(const Tokens& candidate, const std::vector<Tokens>& references,
                    double beta = 1.2);
double rouge_l(std::span<const EvalPair> pairs);

struct CiderResult {
  double score = 0.0;
  std::vector<double> per_pair;
  bool degenerate = false;  // single-pair corpus: every idf weight is zero
};

/// CIDEr-D, n = 1..4, sigma = 6, scaled by 10. Document frequencies are taken
/// over the reference sets of the corpus.
CiderResult cider_d(std::span<const EvalPair> pairs, double sigma = 6.0);

struct MeteorOptions {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
  bool use_stems = true;
  // Optional extra stage: words mapped to the same class id match.
  std::map<std::string, std::string> synonym_class;
};

struct Alignment {
  std::vector<std::pair<int, int>> pairs;  // (candidate, reference), candidate order
  int exact = 0;
  int chunks = 0;
};

/// Best one-to-one unigram alignment: most exact matches, then most matches
/// overall, then fewest chunks.
Alignment meteor_align(const Tokens& candidate, const Tokens& reference,
                       const MeteorOptions& opts = {});
double meteor_pair(const Tokens& candidate, const std::vector<Tokens>& references,
                   const MeteorOptions& opts = {});
double meteor_lite(std::span<const EvalPair> pairs, const MeteorOptions& opts = {});

/// First extracted head of the candidate, stemmed, looked up among the stemmed
/// ground-truth words. Empty candidates and failed extractions are incorrect.
bool subject_correct(const EvalPair& pair, const annotate::PosTagger& tagger,
                     const annotate::Blacklist& blacklist);
double subject_accuracy(std::span<const EvalPair> pairs, const annotate::PosTagger& tagger,
                        const annotate::Blacklist& blacklist);

}  // namespace sovc::metrics
