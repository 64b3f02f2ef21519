#include "sovc/annotate/subjects.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "sovc/common/error.hpp"
#include "sovc/common/text.hpp"

namespace sovc::annotate {

const Blacklist& default_blacklist() {
  static const Blacklist kList = {"video", "clip", "footage", "scene", "screen"};
  return kList;
}

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Head of [begin, end): last noun or pronoun.
std::optional<SubjectPhrase> chunk_head(const std::vector<std::string>& tokens,
                                        const std::vector<PosTag>& tags, Span s) {
  for (std::size_t i = s.end; i-- > s.begin;) {
    if (tags[i] != PosTag::Noun && tags[i] != PosTag::Pron) continue;
    std::size_t first = s.begin;
    while (first < i && (tags[first] == PosTag::Det || tags[first] == PosTag::Num)) ++first;
    std::vector<std::string> words(tokens.begin() + static_cast<std::ptrdiff_t>(first),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    return SubjectPhrase{tokens[i], join(words)};
  }
  return std::nullopt;
}

std::optional<SubjectPhrase> conjunct_subject(const std::vector<std::string>& tokens,
                                              const std::vector<PosTag>& tags, Span s,
                                              const Blacklist& blacklist) {
  // Split into prepositional chunks, remembering the adposition that opens each.
  std::vector<Span> chunks;
  std::vector<std::string> openers;
  std::size_t start = s.begin;
  std::string opener;
  for (std::size_t i = s.begin; i < s.end; ++i) {
    if (tags[i] == PosTag::Adp) {
      chunks.push_back({start, i});
      openers.push_back(opener);
      opener = tokens[i];
      start = i + 1;
    }
  }
  chunks.push_back({start, s.end});
  openers.push_back(opener);

  for (std::size_t c = 0; c < chunks.size(); ++c) {
    if (c > 0 && openers[c] != "of") break;
    auto head = chunk_head(tokens, tags, chunks[c]);
    if (!head) return std::nullopt;
    if (!blacklist.contains(head->head)) return head;
  }
  return std::nullopt;
}

}  // namespace

std::vector<SubjectPhrase> extract_subject_phrases(const std::string& caption,
                                                   const PosTagger& tagger,
                                                   const Blacklist& blacklist) {
  if (caption.empty()) throw ContractError("extract_subjects: empty caption");
  const auto tokens = tokenize_caption(caption);
  if (tokens.empty()) return {};
  const auto tags = tagger.tag(tokens);
  if (tags.size() != tokens.size()) throw ContractError("tagger returned a tag count mismatch");

  std::size_t np_end = tokens.size();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == PosTag::Verb || tags[i] == PosTag::Aux) {
      np_end = i;
      break;
    }
  }

  std::vector<SubjectPhrase> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    if (end > start) {
      if (auto s = conjunct_subject(tokens, tags, {start, end}, blacklist)) {
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](const SubjectPhrase& p) { return p.head == s->head; });
        if (!seen) out.push_back(*s);
      }
    }
  };
  for (std::size_t i = 0; i < np_end; ++i) {
    if (tags[i] == PosTag::Conj) {
      flush(i);
      start = i + 1;
    }
  }
  flush(np_end);
  return out;
}

std::vector<std::string> extract_subjects(const std::string& caption, const PosTagger& tagger,
                                          const Blacklist& blacklist) {
  std::vector<std::string> heads;
  for (auto& p : extract_subject_phrases(caption, tagger, blacklist)) heads.push_back(std::move(p.head));
  return heads;
}

GroupingResult group_captions_by_subject(const std::vector<std::string>& captions,
                                         const PosTagger& tagger, const Blacklist& blacklist) {
  GroupingResult result;
  std::map<std::string, std::size_t> index;
  for (const auto& caption : captions) {
    const auto heads = caption.empty() ? std::vector<std::string>{}
                                       : extract_subjects(caption, tagger, blacklist);
    if (heads.empty()) {
      result.discarded.push_back(caption);
      continue;
    }
    for (const auto& h : heads) {
      auto [it, inserted] = index.try_emplace(h, result.subjects.size());
      if (inserted) result.subjects.push_back({.subject_id = h, .subject_word = h});
      result.subjects[it->second].captions.push_back(caption);
    }
  }
  return result;
}

}  // namespace sovc::annotate
