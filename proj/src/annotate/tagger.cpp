#include "sovc/annotate/tagger.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace sovc::annotate {

namespace {

constexpr std::array kDeterminers = {
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every",
    "another", "his", "her", "their", "its", "my", "our", "your", "no", "both", "all"};

constexpr std::array kNumbers = {"one", "two", "three", "four", "five", "six", "seven",
                                 "eight", "nine", "ten", "several", "many", "few", "multiple"};

constexpr std::array kPronouns = {"he", "she", "it", "they", "we", "i", "you", "someone",
                                  "somebody", "everyone", "everybody", "anyone", "nobody"};

constexpr std::array kAux = {"is", "are", "was", "were", "be", "been", "being", "am",
                             "has", "have", "had", "does", "do", "did", "can", "could",
                             "will", "would", "may", "might", "must", "should", "shall",
                             "gets", "get", "seems", "appears"};

constexpr std::array kContractions = {"he's", "she's", "it's", "that's", "there's",
                                     "they're", "we're", "you're", "i'm"};

constexpr std::array kAdpositions = {
    "of", "in", "on", "at", "with", "by", "from", "to", "into", "onto", "over", "under",
    "near", "behind", "through", "across", "for", "about", "inside", "outside", "along",
    "around", "between", "beside", "next", "up", "down", "off", "out", "while", "like"};

constexpr std::array kConjunctions = {"and", "or", "but", "&"};

constexpr std::array kAdverbs = {"very", "quickly", "slowly", "now", "then", "fast",
                                 "there", "here", "together", "also", "just", "really",
                                 "again", "still", "away", "back", "carefully"};

constexpr std::array kVerbBases = {
    "walk", "run", "ride", "drive", "play", "sing", "dance", "talk", "cook", "cut",
    "slice", "eat", "drink", "jump", "swim", "fly", "fall", "climb", "sit", "stand",
    "lie", "sleep", "write", "draw", "paint", "read", "watch", "look", "show", "put",
    "pour", "mix", "add", "fight", "kick", "throw", "catch", "hit", "hold", "carry",
    "push", "pull", "open", "close", "wash", "clean", "peel", "chop", "fry", "bake",
    "stir", "make", "take", "give", "go", "come", "move", "roll", "spin", "shoot",
    "race", "skate", "ski", "surf", "hug", "kiss", "laugh", "smile", "cry", "speak",
    "say", "tell", "explain", "demonstrate", "perform", "practice", "work", "lift",
    "feed", "pet", "chase", "bite", "bark", "wear", "brush", "comb", "apply", "type",
    "use", "fix", "build", "jog", "drop", "sit", "crawl", "lay", "place", "grab",
    "sing", "exercise", "dive", "bounce", "shake", "wave", "point", "stretch", "rub",
    "grate", "boil", "season", "spread", "fold", "knead", "roll", "sew", "knit", "ride",
    "discuss", "interview", "report", "present", "teach", "sell", "buy", "enter",
    "leave", "cross", "turn", "stop", "start", "try", "attempt", "want", "seem"};

constexpr std::array kIrregular = {
    "ran", "rode", "ridden", "drove", "driven", "sang", "sung", "ate", "eaten", "drank",
    "swam", "flew", "flown", "fell", "fallen", "sat", "stood", "lay", "lain", "slept",
    "wrote", "written", "drew", "drawn", "threw", "thrown", "caught", "held", "made",
    "took", "taken", "gave", "given", "got", "gotten", "went", "gone", "came", "spoke",
    "spoken", "said", "told", "fought", "wore", "worn", "built", "fed", "bit", "bitten",
    "shot", "dove", "shook", "taught", "sold", "bought", "left", "spun", "tried"};

// Nouns that the "-ing" heuristic would otherwise treat as verbs.
constexpr std::array kIngNouns = {"thing", "something", "nothing", "anything", "everything",
                                  "ceiling", "building", "king", "ring", "wedding",
                                  "clothing", "painting", "string", "wing", "morning",
                                  "evening", "ending", "spring", "swing", "pudding",
                                  "stuffing", "icing", "frosting", "dressing", "duckling",
                                  "sibling", "earring", "darling", "viking"};

template <std::size_t N>
bool contains(const std::array<const char*, N>& list, std::string_view w) {
  return std::any_of(list.begin(), list.end(), [&](const char* s) { return w == s; });
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

void add_inflections(const std::string& base, std::vector<std::string>& out) {
  out.push_back(base);
  const char last = base.back();
  if (last == 's' || last == 'x' || last == 'z' || last == 'h' || last == 'o')
    out.push_back(base + "es");
  else if (last == 'y' && base.size() > 1 && !is_vowel(base[base.size() - 2]))
    out.push_back(base.substr(0, base.size() - 1) + "ies");
  else
    out.push_back(base + "s");

  std::string stem = base;
  if (last == 'e' && base != "be" && !base.ends_with("ee")) stem = base.substr(0, base.size() - 1);
  // Consonant doubling for short CVC verbs: run -> running, chop -> chopped.
  const bool cvc = base.size() >= 3 && !is_vowel(last) && last != 'w' && last != 'x' &&
                   last != 'y' && is_vowel(base[base.size() - 2]) && !is_vowel(base[base.size() - 3]);
  const bool short_word = base.size() <= 4;
  if (cvc && short_word) stem = base + last;
  if (last == 'e' && base.ends_with("ie")) {
    out.push_back(base.substr(0, base.size() - 2) + "ying");
  } else {
    out.push_back(stem + "ing");
  }
  if (last == 'y' && base.size() > 1 && !is_vowel(base[base.size() - 2]))
    out.push_back(base.substr(0, base.size() - 1) + "ied");
  else if (last == 'e')
    out.push_back(base + "d");
  else
    out.push_back(stem + "ed");
}

}  // namespace

RuleBasedTagger::RuleBasedTagger() {
  for (const char* b : kVerbBases) add_inflections(b, verb_forms_);
  for (const char* w : kIrregular) verb_forms_.emplace_back(w);
  std::sort(verb_forms_.begin(), verb_forms_.end());
  verb_forms_.erase(std::unique(verb_forms_.begin(), verb_forms_.end()), verb_forms_.end());
}

bool RuleBasedTagger::is_verb_form(const std::string& word) const {
  if (std::binary_search(verb_forms_.begin(), verb_forms_.end(), word)) return true;
  return word.size() > 4 && word.ends_with("ing") && !contains(kIngNouns, word);
}

std::vector<PosTag> RuleBasedTagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& w : tokens) {
    PosTag t = PosTag::Noun;
    if (contains(kDeterminers, w)) {
      t = PosTag::Det;
    } else if (contains(kNumbers, w) || std::all_of(w.begin(), w.end(), ::isdigit)) {
      t = PosTag::Num;
    } else if (contains(kPronouns, w)) {
      t = PosTag::Pron;
    } else if (contains(kAux, w) || contains(kContractions, w)) {
      t = PosTag::Aux;
    } else if (contains(kConjunctions, w)) {
      t = PosTag::Conj;
    } else if (contains(kAdpositions, w)) {
      t = PosTag::Adp;
    } else if (contains(kAdverbs, w)) {
      t = PosTag::Adv;
    } else if (is_verb_form(w)) {
      // A verb-looking word right after a determiner or numeral is read as a
      // noun ("a cook", "two dances").
      const bool after_det = !tags.empty() && (tags.back() == PosTag::Det || tags.back() == PosTag::Num);
      t = after_det ? PosTag::Noun : PosTag::Verb;
    }
    tags.push_back(t);
  }
  return tags;
}

}  // namespace sovc::annotate
