#include "compsumm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "compsumm/gradopt.hpp"
#include "compsumm/greedy.hpp"
#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"

namespace compsumm {

namespace {

void check_budget(std::size_t M, std::size_t n, const char* what) {
  if (M == 0) throw ValidationError(std::string(what) + ": M must be at least 1");
  if (M > n) {
    throw ValidationError(std::string(what) + ": M = " + std::to_string(M) + " exceeds the " + std::to_string(n) +
                          " available points");
  }
}

void check_group_budget(const GroupedDataset& data, std::size_t M) {
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    if (M == 0 || M > data.group_size(g)) {
      throw ValidationError("M = " + std::to_string(M) + " exceeds the size " + std::to_string(data.group_size(g)) +
                            " of group '" + data.group_names()[g] + "'");
    }
  }
}

// Nearest centre by squared distance; ties go to the smaller centre index.
std::vector<int> assign_nearest(const Matrix& points, const Matrix& centers, std::vector<double>* dist) {
  std::vector<int> out(static_cast<std::size_t>(points.rows()));
  if (dist) dist->assign(out.size(), 0.0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(row_span(points, i), row_span(centers, c));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    out[static_cast<std::size_t>(i)] = best;
    if (dist) (*dist)[static_cast<std::size_t>(i)] = best_d;
  }
  return out;
}

// Gives every empty cluster the point farthest from its centre, taken from a
// cluster that keeps at least one point. The point becomes the new centre.
void repair_empty(const Matrix& points, Matrix& centers, std::vector<int>& assignment, std::vector<double>& dist) {
  const auto k = static_cast<std::size_t>(centers.rows());
  std::vector<std::size_t> counts(k, 0);
  for (const int a : assignment) ++counts[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = assignment.size();
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (counts[static_cast<std::size_t>(assignment[i])] < 2) continue;
      if (far == assignment.size() || dist[i] > dist[far]) far = i;
    }
    if (far == assignment.size()) throw NumericError("kmeans: cannot repair an empty cluster");
    --counts[static_cast<std::size_t>(assignment[far])];
    assignment[far] = static_cast<int>(c);
    counts[c] = 1;
    dist[far] = 0.0;
    centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
  }
}

Matrix cluster_means(const Matrix& points, const Matrix& previous, const std::vector<int>& assignment) {
  Matrix centers = Matrix::Zero(previous.rows(), previous.cols());
  std::vector<double> counts(static_cast<std::size_t>(previous.rows()), 0.0);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    centers.row(assignment[i]) += points.row(static_cast<Eigen::Index>(i));
    counts[static_cast<std::size_t>(assignment[i])] += 1.0;
  }
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0.0) {
      centers.row(c) /= counts[static_cast<std::size_t>(c)];
    } else {
      centers.row(c) = previous.row(c);
    }
  }
  return centers;
}

double euclid(const Matrix& points, Eigen::Index a, Eigen::Index b) {
  return std::sqrt(squared_distance(row_span(points, a), row_span(points, b)));
}

}  // namespace

std::vector<int> kmeanspp_init(const Matrix& points, std::size_t M, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  check_budget(M, n, "kmeans++");
  Rng rng(seed);
  std::vector<int> chosen;
  std::vector<char> taken(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t i) {
    chosen.push_back(static_cast<int>(i));
    taken[i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      d2[j] = std::min(d2[j], squared_distance(row_span(points, static_cast<Eigen::Index>(j)),
                                               row_span(points, static_cast<Eigen::Index>(i))));
    }
    d2[i] = 0.0;
  };

  take(static_cast<std::size_t>(rng.uniform_below(n)));
  while (chosen.size() < M) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j]) total += d2[j];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform01() * total;
      double cum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (taken[j] || d2[j] <= 0.0) continue;
        cum += d2[j];
        pick = j;
        if (cum > u) break;
      }
    } else {
      std::vector<std::size_t> free;
      for (std::size_t j = 0; j < n; ++j) {
        if (!taken[j]) free.push_back(j);
      }
      pick = free[static_cast<std::size_t>(rng.uniform_below(free.size()))];
    }
    take(pick);
  }
  return chosen;
}

double cluster_inertia(const Matrix& points, const Matrix& centers, const std::vector<int>& assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    s += squared_distance(row_span(points, static_cast<Eigen::Index>(i)), row_span(centers, assignment[i]));
  }
  return s;
}

ClusterModel kmeans_cluster(const Matrix& points, std::size_t M, std::uint64_t seed, int max_iterations) {
  const std::vector<int> seeds = kmeanspp_init(points, M, seed);
  ClusterModel model;
  model.centers.resize(static_cast<Eigen::Index>(M), points.cols());
  for (std::size_t c = 0; c < M; ++c) model.centers.row(static_cast<Eigen::Index>(c)) = points.row(seeds[c]);

  std::vector<double> dist;
  model.assignment = assign_nearest(points, model.centers, &dist);
  repair_empty(points, model.centers, model.assignment, dist);
  model.inertia_history.push_back(cluster_inertia(points, model.centers, model.assignment));

  for (int it = 1; it <= max_iterations; ++it) {
    model.iterations = it;
    model.centers = cluster_means(points, model.centers, model.assignment);
    std::vector<int> next = assign_nearest(points, model.centers, &dist);
    repair_empty(points, model.centers, next, dist);
    model.inertia_history.push_back(cluster_inertia(points, model.centers, next));
    const bool fixpoint = next == model.assignment;
    model.assignment = std::move(next);
    if (fixpoint) break;
  }
  model.inertia = cluster_inertia(points, model.centers, model.assignment);
  return model;
}

Summary kmeans_summary(const GroupedDataset& data, std::size_t M, std::uint64_t seed) {
  check_group_budget(data, M);
  MetaPrototypes meta;
  meta.points.resize(data.num_groups());
  parallel_for(data.num_groups(), [&](std::size_t g) {
    meta.points[g] = kmeans_cluster(data.gather(data.members(g)), M, derive_seed(seed, g)).centers;
  });
  Summary out = snap(meta, data);
  out.M = M;
  out.provenance = Provenance{};
  out.provenance.objective = "kmeans";
  out.provenance.optimizer = "lloyd";
  return out;
}

MedoidModel kmedoids_cluster(const Matrix& points, std::size_t M, std::uint64_t seed, int max_iterations) {
  const auto n = static_cast<std::size_t>(points.rows());
  MedoidModel model;
  model.medoids = kmeanspp_init(points, M, seed);

  auto assign = [&]() {
    model.assignment.assign(n, 0);
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < M; ++c) {
        const double d = euclid(points, static_cast<Eigen::Index>(i), model.medoids[c]);
        if (d < best) {
          best = d;
          model.assignment[i] = static_cast<int>(c);
        }
      }
      cost += best;
    }
    return cost;
  };

  model.cost_history.push_back(assign());
  for (int it = 1; it <= max_iterations; ++it) {
    model.iterations = it;
    std::vector<std::vector<int>> clusters(M);
    for (std::size_t i = 0; i < n; ++i) clusters[static_cast<std::size_t>(model.assignment[i])].push_back(static_cast<int>(i));
    std::vector<char> is_medoid(n, 0);
    for (const int m : model.medoids) is_medoid[static_cast<std::size_t>(m)] = 1;

    bool changed = false;
    for (std::size_t c = 0; c < M; ++c) {
      const int current = model.medoids[c];
      auto cluster_cost = [&](int candidate) {
        double s = 0.0;
        for (const int i : clusters[c]) s += euclid(points, i, candidate);
        return s;
      };
      int best = current;
      double best_cost = cluster_cost(current);
      for (const int cand : clusters[c]) {
        if (cand == current || is_medoid[static_cast<std::size_t>(cand)]) continue;
        const double cost = cluster_cost(cand);
        if (cost < best_cost || (cost == best_cost && cand < best)) {
          best = cand;
          best_cost = cost;
        }
      }
      if (best != current) {
        is_medoid[static_cast<std::size_t>(current)] = 0;
        is_medoid[static_cast<std::size_t>(best)] = 1;
        model.medoids[c] = best;
        changed = true;
      }
    }
    if (!changed) break;
    model.cost_history.push_back(assign());
  }
  model.cost = model.cost_history.back();
  return model;
}

Summary kmedoids_summary(const GroupedDataset& data, std::size_t M, std::uint64_t seed) {
  check_group_budget(data, M);
  Summary out;
  out.M = M;
  out.prototypes.resize(data.num_groups());
  parallel_for(data.num_groups(), [&](std::size_t g) {
    const auto& members = data.members(g);
    const MedoidModel model = kmedoids_cluster(data.gather(members), M, derive_seed(seed, g));
    for (const int m : model.medoids) out.prototypes[g].push_back(members[static_cast<std::size_t>(m)]);
  });
  out.provenance.objective = "kmedoids";
  out.provenance.optimizer = "pam";
  return out;
}

MmdCriticSelection mmd_critic_select(const GroupedDataset& data, std::size_t total, const KernelSpec& spec) {
  if (total == 0 || total % 2 != 0) throw ValidationError("mmd-critic needs a positive even budget, got " + std::to_string(total));
  if (total > data.size()) {
    throw ValidationError("mmd-critic budget " + std::to_string(total) + " exceeds the dataset size " +
                          std::to_string(data.size()));
  }
  const std::size_t half = total / 2;
  const std::size_t n = data.size();

  ObjectiveSpec single;
  single.kind = ObjectiveKind::mmd_single;
  single.kernel = spec;
  const GreedyTrace trace = greedy_trace(data, single, half);

  MmdCriticSelection out;
  out.prototypes = trace.picks;
  out.prototype_utilities = trace.utilities;

  // Witness at every row: mean kernel to the data minus mean kernel to the
  // prototypes.
  std::vector<double> witness(n, 0.0);
  parallel_for(n, [&](std::size_t c) {
    const auto xc = data.row(c);
    double all = 0.0;
    for (std::size_t i = 0; i < n; ++i) all += rbf(data.row(i), xc, spec);
    double proto = 0.0;
    for (const int j : out.prototypes) proto += rbf(data.row(static_cast<std::size_t>(j)), xc, spec);
    witness[c] = all / static_cast<double>(n) - proto / static_cast<double>(half);
  });

  constexpr double jitter = 1e-10;
  std::vector<char> taken(n, 0);
  for (const int p : out.prototypes) taken[static_cast<std::size_t>(p)] = 1;
  // residual[c] = K_cc + jitter - ||L^{-1} k_C(c)||^2, the Schur complement
  // that multiplies det K_CC when c joins C.
  std::vector<double> residual(n, 1.0 + jitter);
  std::vector<std::vector<double>> factor;  // factor[t][c]: Cholesky column t at row c

  for (std::size_t t = 0; t < half; ++t) {
    std::size_t best = n;
    double best_score = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (taken[c]) continue;
      const double score = std::abs(witness[c]) + std::log(std::max(residual[c], std::numeric_limits<double>::min()));
      if (best == n || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    taken[best] = 1;
    out.criticisms.push_back(static_cast<int>(best));
    out.criticism_scores.push_back(best_score);

    const double pivot = std::sqrt(std::max(residual[best], std::numeric_limits<double>::min()));
    std::vector<double> column(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (taken[c]) continue;
      double v = rbf(data.row(best), data.row(c), spec);
      for (const auto& prev : factor) v -= prev[best] * prev[c];
      column[c] = v / pivot;
      residual[c] -= column[c] * column[c];
    }
    column[best] = pivot;
    factor.push_back(std::move(column));
  }
  return out;
}

Summary mmd_critic_summary(const GroupedDataset& data, std::size_t total, const KernelSpec& spec) {
  const MmdCriticSelection sel = mmd_critic_select(data, total, spec);
  Summary out;
  out.prototypes.resize(data.num_groups());
  for (const int r : sel.prototypes) out.prototypes[static_cast<std::size_t>(data.group_of(static_cast<std::size_t>(r)))].push_back(r);
  for (const int r : sel.criticisms) out.prototypes[static_cast<std::size_t>(data.group_of(static_cast<std::size_t>(r)))].push_back(r);
  out.M = total / std::max<std::size_t>(1, data.num_groups());
  out.provenance.objective = "mmd-critic";
  out.provenance.optimizer = "greedy";
  out.provenance.gamma = spec.gamma();
  return out;
}

}  // namespace compsumm
