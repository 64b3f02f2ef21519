#include <array>
#include <cmath>
#include <set>

#include "ngrams.hpp"
#include "sovc/metrics/scores.hpp"

namespace sovc::metrics {

using detail::NGram;

namespace {

struct TfIdf {
  std::array<std::map<NGram, double>, 4> vec;
  std::array<double, 4> norm{};
  double length = 0;  // bigram count, as in the reference implementation
};

TfIdf to_vector(const Tokens& toks, const std::map<NGram, double>& df, double log_corpus) {
  TfIdf out;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& [g, tf] : detail::count_ngrams(toks, n)) {
      auto it = df.find(g);
      double d = std::log(std::max(1.0, it == df.end() ? 0.0 : it->second));
      double v = tf * (log_corpus - d);
      out.vec[n - 1][g] = v;
      out.norm[n - 1] += v * v;
      if (n == 2) out.length += tf;
    }
    out.norm[n - 1] = std::sqrt(out.norm[n - 1]);
  }
  return out;
}

std::array<double, 4> similarity(const TfIdf& hyp, const TfIdf& ref, double sigma) {
  double delta = hyp.length - ref.length;
  std::array<double, 4> val{};
  for (int n = 0; n < 4; ++n) {
    for (const auto& [g, hv] : hyp.vec[n]) {
      auto it = ref.vec[n].find(g);
      if (it != ref.vec[n].end()) val[n] += std::min(hv, it->second) * it->second;
    }
    if (hyp.norm[n] != 0 && ref.norm[n] != 0) val[n] /= hyp.norm[n] * ref.norm[n];
    val[n] *= std::exp(-(delta * delta) / (2 * sigma * sigma));
  }
  return val;
}

}  // namespace

CiderResult cider_d(std::span<const EvalPair> pairs, double sigma) {
  check_pairs(pairs);
  std::map<NGram, double> df;
  for (const auto& p : pairs) {
    std::set<NGram> seen;
    for (const auto& r : p.references)
      for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& [g, c] : detail::count_ngrams(r, n)) seen.insert(g);
    for (const auto& g : seen) df[g] += 1;
  }
  double log_corpus = std::log(static_cast<double>(pairs.size()));

  CiderResult res;
  res.degenerate = pairs.size() < 2;
  for (const auto& p : pairs) {
    auto hyp = to_vector(p.candidate, df, log_corpus);
    double score = 0;
    for (const auto& r : p.references) {
      auto v = similarity(hyp, to_vector(r, df, log_corpus), sigma);
      score += (v[0] + v[1] + v[2] + v[3]) / 4.0;
    }
    score = score / static_cast<double>(p.references.size()) * 10.0;
    res.per_pair.push_back(score);
    res.score += score;
  }
  res.score /= static_cast<double>(pairs.size());
  return res;
}

}  // namespace sovc::metrics
