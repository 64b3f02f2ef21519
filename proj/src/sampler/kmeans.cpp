#include "sovc/sampler/kmeans.hpp"

#include <limits>

#include "sovc/common/error.hpp"
#include "sovc/common/rng.hpp"

namespace sovc::sampler {

std::vector<std::vector<int>> ClusterAssignment::members() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_clusters));
  for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  return out;
}

double inertia(const Eigen::MatrixXd& points, const std::vector<int>& labels, const Eigen::MatrixXd& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return total;
}

namespace {

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& x, int k, SplitMix64& rng) {
  const Eigen::Index n = x.rows();
  std::vector<int> chosen;
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  chosen.push_back(static_cast<int>(rng.below(static_cast<std::size_t>(n))));
  taken[static_cast<std::size_t>(chosen.back())] = true;
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  while (static_cast<int>(chosen.size()) < k) {
    const auto& last = x.row(chosen.back());
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], (x.row(i) - last).squaredNorm());
      total += d2[static_cast<std::size_t>(i)];
    }
    int next = -1;
    if (total > 0.0) {
      next = static_cast<int>(rng.categorical(d2));
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        if (!taken[static_cast<std::size_t>(i)]) {
          next = static_cast<int>(i);
          break;
        }
    }
    chosen.push_back(next);
    taken[static_cast<std::size_t>(next)] = true;
  }
  Eigen::MatrixXd c(k, x.cols());
  for (int j = 0; j < k; ++j) c.row(j) = x.row(chosen[static_cast<std::size_t>(j)]);
  return c;
}

ClusterAssignment lloyd(const Eigen::MatrixXd& points, int num_clusters, std::uint64_t seed, int max_iters) {
  const auto n = static_cast<int>(points.rows());
  SplitMix64 rng(seed);
  ClusterAssignment a;
  a.num_clusters = num_clusters;
  a.centroids = plus_plus_init(points, num_clusters, rng);
  a.labels.assign(static_cast<std::size_t>(n), -1);

  const auto k = static_cast<std::size_t>(num_clusters);
  for (int iter = 0; iter < std::max(1, max_iters); ++iter) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < num_clusters; ++j) {
        const double d = (points.row(i) - a.centroids.row(j)).squaredNorm();
        if (d < best) {
          best = d;
          labels[static_cast<std::size_t>(i)] = j;
        }
      }
    }

    std::vector<int> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] > 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(l)] < 2) continue;
        const double d = (points.row(i) - a.centroids.row(l)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = static_cast<int>(j);
      sizes[j] = 1;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(num_clusters, points.cols());
    for (int i = 0; i < n; ++i) sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int j = 0; j < num_clusters; ++j) a.centroids.row(j) = sums.row(j) / sizes[static_cast<std::size_t>(j)];

    const bool changed = labels != a.labels;
    a.labels = std::move(labels);
    a.inertia_history.push_back(inertia(points, a.labels, a.centroids));
    a.iterations = iter + 1;
    if (!changed) break;
  }
  return a;
}

}  // namespace

ClusterAssignment kmeans(const Eigen::MatrixXd& points, int num_clusters, std::uint64_t seed, int max_iters,
                         int num_inits) {
  const auto n = static_cast<int>(points.rows());
  if (num_clusters < 1) throw InputError("kmeans: T must be >= 1", "T");
  if (num_clusters > n)
    throw InputError("kmeans: T=" + std::to_string(num_clusters) + " exceeds N=" + std::to_string(n) +
                         "; use the N <= T fallback of sample_frames",
                     "T");
  if (num_inits < 1) throw InputError("kmeans: num_inits must be >= 1", "kmeans_inits");
  ClusterAssignment best = lloyd(points, num_clusters, seed, max_iters);
  for (int r = 1; r < num_inits; ++r) {
    auto a = lloyd(points, num_clusters, derive_seed(seed, "init" + std::to_string(r)), max_iters);
    if (a.inertia() < best.inertia()) best = std::move(a);
  }
  return best;
}

}  // namespace sovc::sampler
