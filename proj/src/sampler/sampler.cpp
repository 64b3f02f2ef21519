#include "sovc/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "sovc/common/error.hpp"
#include "sovc/common/rng.hpp"

namespace sovc::sampler {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Regular: return "regular";
    case Strategy::Similarity: return "similarity";
    case Strategy::AddingInterval: return "adding_interval";
    case Strategy::Clustering: return "clustering";
  }
  return "clustering";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "regular") return Strategy::Regular;
  if (s == "similarity") return Strategy::Similarity;
  if (s == "adding_interval" || s == "adding-interval") return Strategy::AddingInterval;
  if (s == "clustering") return Strategy::Clustering;
  throw InputError("unknown sampling strategy '" + s + "'", "strategy");
}

std::vector<double> subject_similarities(const FrameFeatures& features) {
  std::vector<double> s(static_cast<std::size_t>(features.num_frames()));
  const Eigen::VectorXd subject = features.subject;
  for (int i = 0; i < features.num_frames(); ++i)
    s[static_cast<std::size_t>(i)] = cosine_sim(Eigen::VectorXd(features.matrix.row(i).transpose()), subject);
  return s;
}

namespace {

std::vector<double> softmax(const std::vector<double>& x) {
  const double mx = *std::max_element(x.begin(), x.end());
  std::vector<double> p(x.size());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += p[i] = std::exp(x[i] - mx);
  for (double& v : p) v /= z;
  return p;
}

ProbTable global_table(const std::vector<double>& sims) {
  ProbTable t;
  for (std::size_t i = 0; i < sims.size(); ++i) t.members.push_back(static_cast<int>(i));
  t.probs = softmax(sims);
  return t;
}

std::vector<int> draw_without_replacement(const ProbTable& table, int count, int min_gap, SplitMix64& rng) {
  std::vector<double> weights = table.probs;
  std::vector<int> picks;
  while (static_cast<int>(picks.size()) < count) {
    std::vector<double> eligible = weights;
    if (min_gap > 0) {
      for (std::size_t i = 0; i < eligible.size(); ++i)
        for (int p : picks)
          if (std::abs(table.members[i] - p) < min_gap) eligible[i] = 0.0;
      const bool any = std::any_of(eligible.begin(), eligible.end(), [](double w) { return w > 0.0; });
      if (!any) eligible = weights;
    }
    const std::size_t i = rng.categorical(eligible);
    picks.push_back(table.members[i]);
    weights[i] = 0.0;
  }
  return picks;
}

}  // namespace

std::vector<ProbTable> cluster_probs(const FrameFeatures& features, const ClusterAssignment& assignment) {
  const auto sims = subject_similarities(features);
  std::vector<ProbTable> tables;
  for (const auto& members : assignment.members()) {
    ProbTable t;
    t.members = members;
    std::vector<double> s;
    for (int m : members) s.push_back(sims[static_cast<std::size_t>(m)]);
    t.probs = s.empty() ? std::vector<double>{} : softmax(s);
    tables.push_back(std::move(t));
  }
  return tables;
}

SampleResult sample_frames(const FrameFeatures& features, const SamplerConfig& config) {
  features.validate();
  const int n = features.num_frames();
  const int t = config.num_frames;
  if (t < 1) throw InputError("sampler: T must be >= 1", "T");

  SampleResult r;
  if (n <= t) {
    for (int i = 0; i < n; ++i) r.indices.push_back(i);
    r.indices.resize(static_cast<std::size_t>(t), n - 1);
    return r;
  }

  SplitMix64 rng(derive_seed(config.seed, "sample"));
  switch (config.strategy) {
    case Strategy::Regular:
      for (int k = 0; k < t; ++k)
        r.indices.push_back(t == 1 ? 0 : static_cast<int>(std::lround(static_cast<double>(k) * (n - 1) / (t - 1))));
      break;
    case Strategy::Similarity:
    case Strategy::AddingInterval: {
      r.probs.push_back(global_table(subject_similarities(features)));
      const int gap = config.strategy == Strategy::Similarity ? 0
                      : config.min_gap >= 0                    ? config.min_gap
                                                               : n / (2 * t);
      r.indices = draw_without_replacement(r.probs.front(), t, gap, rng);
      break;
    }
    case Strategy::Clustering: {
      r.assignment = kmeans(features.matrix, t, config.seed, config.kmeans_max_iters, config.kmeans_inits);
      r.probs = cluster_probs(features, *r.assignment);
      for (const auto& table : r.probs) r.indices.push_back(table.members[rng.categorical(table.probs)]);
      break;
    }
  }
  std::sort(r.indices.begin(), r.indices.end());
  // Collapse duplicates, then re-pad with the last index.
  r.indices.erase(std::unique(r.indices.begin(), r.indices.end()), r.indices.end());
  r.indices.resize(static_cast<std::size_t>(t), r.indices.back());
  return r;
}

}  // namespace sovc::sampler
