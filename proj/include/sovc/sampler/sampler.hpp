#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sovc/sampler/features.hpp"
#include "sovc/sampler/kmeans.hpp"

namespace sovc::sampler {

enum class Strategy { Regular, Similarity, AddingInterval, Clustering };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);  // regular|similarity|adding_interval|clustering

struct SamplerConfig {
  int num_frames = 32;  // T: frames to select (and clusters for the clustering strategy)
  std::uint64_t seed = 0;
  int kmeans_max_iters = 100;
  int kmeans_inits = 20;
  Strategy strategy = Strategy::Clustering;
  // Minimum index gap for adding_interval; negative means floor(N / (2T)).
  int min_gap = -1;
};

/// Selection distribution over a set of frames: p(f_i | C_j) for one cluster,
/// or the global softmax for the similarity strategies.
struct ProbTable {
  std::vector<int> members;  // ascending frame indices
  std::vector<double> probs;
};

struct SampleResult {
  std::vector<int> indices;  // sorted, length T
  std::vector<ProbTable> probs;
  std::optional<ClusterAssignment> assignment;
};

/// s(f_i) = cosine(f_i, f_subject) for every frame.
std::vector<double> subject_similarities(const FrameFeatures& features);

/// Softmax of s(f) within each cluster, computed with max subtraction.
std::vector<ProbTable> cluster_probs(const FrameFeatures& features, const ClusterAssignment& assignment);

// Strategies:
//   regular          round(k (N-1) / (T-1)), k = 0..T-1 (all zeros when T = 1)
//   similarity       T draws without replacement from the global softmax of s
//   adding_interval  as similarity, but each pick keeps at least min_gap
//                    indices from earlier picks; relaxed when nothing is eligible
//   clustering       kmeans into T clusters, one draw per cluster
// When N <= T every strategy returns 0..N-1 padded with N-1 up to length T.
// Deterministic in (features, config).
SampleResult sample_frames(const FrameFeatures& features, const SamplerConfig& config);

}  // namespace sovc::sampler
