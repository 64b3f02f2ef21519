#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sovc::sampler {

struct ClusterAssignment {
  std::vector<int> labels;    // N entries in [0, T)
  Eigen::MatrixXd centroids;  // T x d
  int num_clusters = 0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration
  int iterations = 0;

  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
  std::vector<std::vector<int>> members() const;
};

/// Sum of squared distances of each row to the centroid of its label.
double inertia(const Eigen::MatrixXd& points, const std::vector<int>& labels, const Eigen::MatrixXd& centroids);

// k-means++ seeding from SplitMix64(seed), then Lloyd iterations until the
// labels stop changing or max_iters is reached. Ties go to the lowest cluster
// id. An empty cluster takes the point farthest from its current centroid
// (lowest index on ties) out of a cluster with more than one member, so every
// cluster ends non-empty. The best of `num_inits` seedings (lowest final
// inertia, earliest on ties) is returned; seeding r > 0 draws from
// derive_seed(seed, "init<r>"). Throws InputError when T > N.
ClusterAssignment kmeans(const Eigen::MatrixXd& points, int num_clusters, std::uint64_t seed, int max_iters = 100,
                         int num_inits = 20);

}  // namespace sovc::sampler
