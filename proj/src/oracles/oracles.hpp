#ifndef COMPSUMM_ORACLES_HPP
#define COMPSUMM_ORACLES_HPP

// Slow, independent reference implementations used by the tests, the
// acceptance suite and `compsumm selftest`. Nothing here shares code with the
// routines it checks beyond the data containers.

#include <cstdint>
#include <span>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/objectives.hpp"
#include "compsumm/rng.hpp"

namespace compsumm::oracle {

/// MMD^2 from three explicit double loops, accumulated in long double.
double mmd2(const Matrix& X, const Matrix& Y, double gamma);

/// Central differences of `utility(meta)` from the objectives module.
MetaPrototypes finite_difference_gradient(const MetaPrototypes& meta, const GroupedDataset& data,
                                          const ObjectiveSpec& spec, double step);

/// max_k |a_k - n_k| / max_k max(|a_k|, |n_k|) over all coordinates.
double relative_gradient_error(const MetaPrototypes& analytic, const MetaPrototypes& numeric);

/// Best value over every choice of M members per group. The objectives
/// handled here (nn, mmd-diff, mmd-div) are sums of per-group terms, so each
/// group is enumerated on its own.
struct ExhaustiveResult {
  double value = 0.0;
  Summary best;
};
ExhaustiveResult exhaustive_optimum(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M);

/// Maximises sum a - 1/2 a'Qa over 0 <= a <= C, y'a = 0 by projected
/// gradient ascent with step 1/L; the projection solves for the multiplier
/// of the equality constraint by bisection.
struct QpResult {
  std::vector<double> alpha;
  double objective = 0.0;
  int iterations = 0;
};
QpResult svm_dual_qp(const Matrix& X, std::span<const int> y, double C, double gamma, int max_iterations = 200000,
                     double tolerance = 1e-13);

/// A random selection S with 1..3 items in every group (leaving at least
/// one member free), a random unselected candidate s, the incremental gain
/// reported by GreedyState and U(S + s) - U(S) evaluated from scratch.
struct SelectionProbe {
  Summary selection;
  int candidate = -1;
  double gain = 0.0;
  double difference = 0.0;
};
SelectionProbe random_probe(const GroupedDataset& data, const ObjectiveSpec& spec, Rng& rng);

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

}  // namespace compsumm::oracle

#endif  // COMPSUMM_ORACLES_HPP
