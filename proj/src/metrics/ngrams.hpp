#pragma once

#include <map>
#include <string>
#include <vector>

namespace sovc::metrics::detail {

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, int>;

inline NGramCounts count_ngrams(const std::vector<std::string>& toks, std::size_t n) {
  NGramCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i)
    ++out[NGram(toks.begin() + static_cast<long>(i), toks.begin() + static_cast<long>(i + n))];
  return out;
}

}  // namespace sovc::metrics::detail
