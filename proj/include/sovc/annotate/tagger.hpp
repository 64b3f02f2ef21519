#pragma once

#include <string>
#include <vector>

namespace sovc::annotate {

enum class PosTag { Det, Num, Pron, Noun, Verb, Aux, Adp, Conj, Adv };

/// Part-of-speech tagging interface. Implementations receive lowercase tokens
/// and return one tag per token.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<PosTag> tag(const std::vector<std::string>& tokens) const = 0;
};

// Closed-class lexicons plus a verb list with generated inflections. Unknown
// open-class words are tagged Noun, so adjectives fold into the noun phrase
// and the phrase head stays the last word before the verb.
class RuleBasedTagger : public PosTagger {
 public:
  RuleBasedTagger();
  std::vector<PosTag> tag(const std::vector<std::string>& tokens) const override;

  bool is_verb_form(const std::string& word) const;

 private:
  std::vector<std::string> verb_forms_;  // sorted
};

}  // namespace sovc::annotate
