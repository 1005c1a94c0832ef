#ifndef COMPSUMM_BASELINES_HPP
#define COMPSUMM_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/kernel.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm {

/// k-means++ seeding: the first centre uniformly, each further centre with
/// probability proportional to its squared distance to the nearest chosen
/// centre. When every remaining point has zero distance the pick is uniform
/// over the unchosen points. Returns row indices of `points`.
std::vector<int> kmeanspp_init(const Matrix& points, std::size_t M, std::uint64_t seed);

struct ClusterModel {
  Matrix centers;
  std::vector<int> assignment;
  double inertia = 0.0;
  /// Inertia after each assignment step; nonincreasing.
  std::vector<double> inertia_history;
  int iterations = 0;
};

/// Sum of squared distances from each point to its assigned centre.
double cluster_inertia(const Matrix& points, const Matrix& centers, const std::vector<int>& assignment);

/// Lloyd's algorithm from k-means++ seeds, until the assignment stops
/// changing or `max_iterations`. An empty cluster takes the point farthest
/// from its current centre (among clusters with more than one point).
ClusterModel kmeans_cluster(const Matrix& points, std::size_t M, std::uint64_t seed, int max_iterations = 300);

/// Per group: k-means with seed derive_seed(seed, g), centres snapped to the
/// nearest unused member.
Summary kmeans_summary(const GroupedDataset& data, std::size_t M, std::uint64_t seed);

struct MedoidModel {
  std::vector<int> medoids;  ///< row indices of `points`
  std::vector<int> assignment;
  double cost = 0.0;         ///< sum of Euclidean distances to assigned medoids
  std::vector<double> cost_history;
  int iterations = 0;
};

/// Alternates nearest-medoid assignment and per-cluster medoid update
/// (the member minimising the summed Euclidean distance to its cluster).
MedoidModel kmedoids_cluster(const Matrix& points, std::size_t M, std::uint64_t seed, int max_iterations = 300);

Summary kmedoids_summary(const GroupedDataset& data, std::size_t M, std::uint64_t seed);

struct MmdCriticSelection {
  std::vector<int> prototypes;               ///< rows, pick order
  std::vector<int> criticisms;               ///< rows, pick order
  std::vector<double> prototype_utilities;   ///< -MMD^2(S, X) after each prototype
  std::vector<double> criticism_scores;      ///< |witness| + logdet gain of each criticism
};

/// Label-free prototypes (greedy -MMD^2 against the whole dataset) followed
/// by criticisms maximising |witness(c)| + (log det K_CC increase), with the
/// determinant tracked by an incremental Cholesky factor with 1e-10 jitter.
MmdCriticSelection mmd_critic_select(const GroupedDataset& data, std::size_t total, const KernelSpec& spec);

/// The selection above with every item filed under its true group; groups
/// may receive different numbers of items, including none.
Summary mmd_critic_summary(const GroupedDataset& data, std::size_t total, const KernelSpec& spec);

}  // namespace compsumm

#endif  // COMPSUMM_BASELINES_HPP
