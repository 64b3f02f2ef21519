#include <array>
#include <cmath>
#include <cstdlib>

#include "ngrams.hpp"
#include "sovc/common/error.hpp"
#include "sovc/metrics/scores.hpp"

namespace sovc::metrics {

using detail::count_ngrams;

void check_pairs(std::span<const EvalPair> pairs) {
  if (pairs.empty()) throw ValidationError("empty evaluation corpus");
  for (const auto& p : pairs)
    if (p.references.empty()) throw ValidationError("pair " + p.id + " has no references", p.id);
}

namespace {

struct Counts {
  std::array<long, 4> match{};
  std::array<long, 4> total{};
};

Counts clipped_counts(const Tokens& cand, const std::vector<Tokens>& refs) {
  Counts c;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto cc = count_ngrams(cand, n);
    std::map<detail::NGram, int> max_ref;
    for (const auto& r : refs)
      for (const auto& [g, k] : count_ngrams(r, n)) max_ref[g] = std::max(max_ref[g], k);
    for (const auto& [g, k] : cc) {
      auto it = max_ref.find(g);
      if (it != max_ref.end()) c.match[n - 1] += std::min(k, it->second);
    }
    c.total[n - 1] = cand.size() >= n ? static_cast<long>(cand.size() - n + 1) : 0;
  }
  return c;
}

std::size_t closest_ref_length(std::size_t cand_len, const std::vector<Tokens>& refs) {
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    auto d = std::labs(static_cast<long>(r.size()) - static_cast<long>(cand_len));
    auto bd = std::labs(static_cast<long>(best) - static_cast<long>(cand_len));
    if (d < bd || (d == bd && r.size() < best)) best = r.size();
  }
  return best;
}

double brevity(double c, double r) { return c > r ? 1.0 : std::exp(1.0 - r / c); }

}  // namespace

double bleu4(std::span<const EvalPair> pairs) {
  check_pairs(pairs);
  Counts sum;
  double c_len = 0, r_len = 0;
  for (const auto& p : pairs) {
    auto c = clipped_counts(p.candidate, p.references);
    for (int n = 0; n < 4; ++n) {
      sum.match[n] += c.match[n];
      sum.total[n] += c.total[n];
    }
    c_len += static_cast<double>(p.candidate.size());
    r_len += static_cast<double>(closest_ref_length(p.candidate.size(), p.references));
  }
  double log_p = 0;
  for (int n = 0; n < 4; ++n) {
    if (sum.total[n] == 0 || sum.match[n] == 0) return 0.0;
    log_p += std::log(static_cast<double>(sum.match[n]) / static_cast<double>(sum.total[n]));
  }
  return brevity(c_len, r_len) * std::exp(log_p / 4.0);
}

double sentence_bleu4(const Tokens& candidate, const std::vector<Tokens>& references) {
  if (candidate.empty() || references.empty()) return 0.0;
  auto c = clipped_counts(candidate, references);
  double log_p = 0;
  for (int n = 0; n < 4; ++n) {
    double p = c.total[n] ? static_cast<double>(c.match[n]) / static_cast<double>(c.total[n]) : 0.0;
    log_p += std::log(p + 1e-9);
  }
  double r = static_cast<double>(closest_ref_length(candidate.size(), references));
  return brevity(static_cast<double>(candidate.size()), r) * std::exp(log_p / 4.0);
}

}  // namespace sovc::metrics
