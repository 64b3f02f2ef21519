#include "sovc/metrics/stemmer.hpp"

#include <array>
#include <utility>

namespace sovc::metrics {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return false;
    case 'y': return i == 0 ? true : !is_consonant(w, i - 1);
    default: return true;
  }
}

// m in [C](VC)^m[V] for w[0, len).
int measure(const std::string& w, std::size_t len) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < len; ++i) {
    const bool c = is_consonant(w, i);
    if (c && prev_vowel) ++m;
    prev_vowel = !c;
  }
  return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool ends_double_consonant(const std::string& w, std::size_t len) {
  return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  const char last = w[len - 1];
  return is_consonant(w, len - 3) && !is_consonant(w, len - 2) && is_consonant(w, len - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view s) {
  return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0;
}

using Rule = std::pair<std::string_view, std::string_view>;

// Finds the first (= longest, given the table order) matching suffix and, if
// the stem measure exceeds min_m, replaces it. Only one rule per step fires.
template <std::size_t N>
void apply_rules(std::string& w, const std::array<Rule, N>& rules, int min_m) {
  for (const auto& [suffix, repl] : rules) {
    if (!ends_with(w, suffix)) continue;
    const std::size_t stem = w.size() - suffix.size();
    if (measure(w, stem) > min_m) w = w.substr(0, stem) + std::string(repl);
    return;
  }
}

constexpr std::array<Rule, 20> kStep2 = {{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"}, {"izer", "ize"},
    {"abli", "able"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"},
    {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}, {"alism", "al"}, {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}};

constexpr std::array<Rule, 7> kStep3 = {{{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
                                         {"ical", "ic"}, {"ful", ""}, {"ness", ""}}};

constexpr std::array<std::string_view, 19> kStep4 = {"al",  "ance", "ence", "er",  "ic",  "able", "ible",
                                                     "ant", "ement", "ment", "ent", "ion", "ou",  "ism",
                                                     "ate", "iti",  "ous",  "ive", "ize"};

void step1ab(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
  } else if (ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }

  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
    return;
  }
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      if (has_vowel(w, w.size() - suffix.size())) {
        w.resize(w.size() - suffix.size());
        stripped = true;
      }
      break;
    }
  }
  if (!stripped) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w += 'e';
  } else if (ends_double_consonant(w, w.size()) && !ends_with(w, "l") && !ends_with(w, "s") &&
             !ends_with(w, "z")) {
    w.resize(w.size() - 1);
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w += 'e';
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step4(std::string& w) {
  for (std::string_view suffix : kStep4) {
    if (!ends_with(w, suffix)) continue;
    const std::size_t stem = w.size() - suffix.size();
    bool ok = measure(w, stem) > 1;
    if (suffix == "ion") ok = ok && stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't');
    if (ok) w.resize(stem);
    return;
  }
}

void step5(std::string& w) {
  if (ends_with(w, "e")) {
    const std::size_t stem = w.size() - 1;
    const int m = measure(w, stem);
    if (m > 1 || (m == 1 && !ends_cvc(w, stem))) w.resize(stem);
  }
  if (measure(w, w.size()) > 1 && ends_double_consonant(w, w.size()) && ends_with(w, "l")) w.resize(w.size() - 1);
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  if (w.empty()) return w;
  step1ab(w);
  step1c(w);
  apply_rules(w, kStep2, 0);
  apply_rules(w, kStep3, 0);
  step4(w);
  step5(w);
  return w;
}

}  // namespace sovc::metrics
