#include <algorithm>

#include "sovc/metrics/scores.hpp"

namespace sovc::metrics {

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_pair(const Tokens& candidate, const std::vector<Tokens>& references, double beta) {
  double best = 0.0;
  for (const auto& r : references) {
    auto l = static_cast<double>(lcs_length(candidate, r));
    if (l == 0) continue;
    double p = l / static_cast<double>(candidate.size());
    double rec = l / static_cast<double>(r.size());
    best = std::max(best, (1 + beta * beta) * p * rec / (rec + beta * beta * p));
  }
  return best;
}

double rouge_l(std::span<const EvalPair> pairs) {
  check_pairs(pairs);
  double sum = 0;
  for (const auto& p : pairs) sum += rouge_l_pair(p.candidate, p.references);
  return sum / static_cast<double>(pairs.size());
}

}  // namespace sovc::metrics
