#include <algorithm>
#include <cmath>
#include <tuple>

#include "sovc/metrics/scores.hpp"
#include "sovc/metrics/stemmer.hpp"

namespace sovc::metrics {

namespace {

using Key = std::tuple<int, int, int>;  // exact, total, -chunks

class Aligner {
 public:
  Aligner(const Tokens& cand, const Tokens& ref, const MeteorOptions& opts)
      : cand_(cand), ref_(ref), edge_(cand.size(), std::vector<int>(ref.size(), 0)),
        used_(ref.size(), false) {
    std::vector<std::string> cs, rs;
    for (const auto& w : cand) cs.push_back(opts.use_stems ? porter_stem(w) : w);
    for (const auto& w : ref) rs.push_back(opts.use_stems ? porter_stem(w) : w);
    auto syn = [&](const std::string& w) {
      auto it = opts.synonym_class.find(w);
      return it == opts.synonym_class.end() ? std::string{} : it->second;
    };
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (cand[i] == ref[j]) {
          edge_[i][j] = 2;
        } else if (cs[i] == rs[j]) {
          edge_[i][j] = 1;
        } else {
          auto a = syn(cand[i]);
          if (!a.empty() && a == syn(ref[j])) edge_[i][j] = 1;
        }
      }
  }

  Alignment run() {
    search(0, 0, 0);
    Alignment out;
    out.pairs = best_pairs_;
    out.exact = std::get<0>(best_);
    out.chunks = -std::get<2>(best_);
    return out;
  }

 private:
  Key bound(std::size_t i, int exact, int chunks) const {
    std::map<std::string, std::pair<int, int>> words;
    for (std::size_t k = i; k < cand_.size(); ++k) ++words[cand_[k]].first;
    for (std::size_t j = 0; j < ref_.size(); ++j)
      if (!used_[j]) ++words[ref_[j]].second;
    int ex = exact;
    for (const auto& [w, c] : words) ex += std::min(c.first, c.second);
    int cand_side = 0, ref_side = 0;
    std::vector<bool> ref_hit(ref_.size(), false);
    for (std::size_t k = i; k < cand_.size(); ++k) {
      bool any = false;
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used_[j] && edge_[k][j]) any = ref_hit[j] = true;
      cand_side += any;
    }
    for (bool h : ref_hit) ref_side += h;
    return {ex, static_cast<int>(pairs_.size()) + std::min(cand_side, ref_side), -chunks};
  }

  void search(std::size_t i, int exact, int chunks) {
    if (found_ && bound(i, exact, chunks) <= best_) return;
    if (i == cand_.size()) {
      best_ = {exact, static_cast<int>(pairs_.size()), -chunks};
      best_pairs_ = pairs_;
      found_ = true;
      return;
    }
    std::vector<std::size_t> order;
    if (!pairs_.empty() && pairs_.back().first + 1 == static_cast<int>(i)) {
      auto j = static_cast<std::size_t>(pairs_.back().second + 1);
      if (j < ref_.size() && !used_[j] && edge_[i][j]) order.push_back(j);
    }
    for (int kind : {2, 1})
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used_[j] && edge_[i][j] == kind && (order.empty() || order.front() != j))
          order.push_back(j);
    for (auto j : order) {
      bool extends = !pairs_.empty() && pairs_.back().first + 1 == static_cast<int>(i) &&
                     pairs_.back().second + 1 == static_cast<int>(j);
      used_[j] = true;
      pairs_.emplace_back(static_cast<int>(i), static_cast<int>(j));
      search(i + 1, exact + (edge_[i][j] == 2), chunks + (extends ? 0 : 1));
      pairs_.pop_back();
      used_[j] = false;
    }
    search(i + 1, exact, chunks);
  }

  const Tokens& cand_;
  const Tokens& ref_;
  std::vector<std::vector<int>> edge_;  // 2 exact, 1 stem or synonym, 0 none
  std::vector<bool> used_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::pair<int, int>> best_pairs_;
  Key best_{0, 0, 0};
  bool found_ = false;
};

}  // namespace

Alignment meteor_align(const Tokens& candidate, const Tokens& reference, const MeteorOptions& opts) {
  return Aligner(candidate, reference, opts).run();
}

double meteor_pair(const Tokens& candidate, const std::vector<Tokens>& references,
                   const MeteorOptions& opts) {
  double best = 0.0;
  for (const auto& ref : references) {
    auto al = meteor_align(candidate, ref, opts);
    if (al.pairs.empty()) continue;
    auto m = static_cast<double>(al.pairs.size());
    double p = m / static_cast<double>(candidate.size());
    double r = m / static_cast<double>(ref.size());
    double fmean = p * r / (opts.alpha * p + (1 - opts.alpha) * r);
    double pen = opts.gamma * std::pow(al.chunks / m, opts.beta);
    best = std::max(best, fmean * (1 - pen));
  }
  return best;
}

double meteor_lite(std::span<const EvalPair> pairs, const MeteorOptions& opts) {
  check_pairs(pairs);
  double sum = 0;
  for (const auto& p : pairs) sum += meteor_pair(p.candidate, p.references, opts);
  return sum / static_cast<double>(pairs.size());
}

}  // namespace sovc::metrics
