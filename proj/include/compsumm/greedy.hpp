#ifndef COMPSUMM_GREEDY_HPP
#define COMPSUMM_GREEDY_HPP

#include <optional>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/kernel.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm {

/// Incremental bookkeeping for greedy maximisation of one objective.
///
/// Candidates are partitioned into pools: one pool per group, or a single
/// pool of all rows for mmd-single. For each pool the state caches
///   - own[c]   = sum_{i in pool} k(x_i, x_c)
///   - other[c] = sum_{i not in pool} k(x_i, x_c)        (mmd-diff, mmd-div)
///   - sel[c]   = sum_{j in S} k(x_j, x_c)
///   - sum_VS, sum_SS, sum_cross over the current selection S
///   - best[i]  = max_{j in S} k(x_j, x_i)                (nn)
/// so a marginal gain costs O(1) for the MMD objectives and O(pool size) for
/// nn. Adding a prototype costs one kernel row over its pool.
class GreedyState {
 public:
  GreedyState(const GroupedDataset& data, const ObjectiveSpec& spec);

  /// U(S + {candidate}) - U(S). Throws ValidationError if the candidate is
  /// already selected.
  double marginal_gain(int candidate) const;
  void add(int candidate);

  /// Current U(S), including the selection-independent constant.
  double utility() const;
  /// U(S) - U(empty selection); sums of gains so far.
  double selection_value() const;
  double empty_value() const { return empty_value_; }

  bool is_selected(int row) const;
  std::size_t num_pools() const { return pools_.size(); }
  /// Global row indices of pool p in ascending order.
  const std::vector<int>& pool_rows(std::size_t p) const { return pools_[p].rows; }
  const std::vector<int>& pool_selection(std::size_t p) const { return pools_[p].selected; }
  std::size_t pool_of(int row) const { return pool_of_[static_cast<std::size_t>(row)]; }

  /// Summary in dataset group order (rows keep their true groups).
  Summary summary(std::size_t M) const;

  /// Largest absolute difference between the cached aggregates and their
  /// recomputation from scratch. For tests.
  double max_cache_deviation() const;

 private:
  struct Pool {
    std::vector<int> rows;
    std::vector<int> selected;  // global rows, selection order
    std::vector<char> taken;    // by local index
    Vector own;
    Vector other;
    Vector sel;
    Vector best;
    std::optional<KernelMatrix> block;  // nn only
    double sum_vs = 0.0;
    double sum_ss = 0.0;
    double sum_cross = 0.0;
    double other_count = 0.0;
    double own_total = 0.0;      // sum_{i,j in pool} k
    double other_total = 0.0;    // sum_{i,j not in pool} k
  };

  double pool_value(const Pool& pool) const;
  double pool_constant(const Pool& pool) const;
  std::vector<double> kernel_row(const Pool& pool, int row) const;

  const GroupedDataset& data_;
  ObjectiveSpec spec_;
  std::vector<Pool> pools_;
  std::vector<std::size_t> pool_of_;
  std::vector<std::size_t> local_of_;
  double empty_value_ = 0.0;
};

/// Closed-form discrete derivative of A(S) = 2/(n|S|) sum_VS - 1/|S|^2 sum_SS,
/// the selection-dependent part of -MMD^2(X_S, X_V), for adding candidate c
/// with own_c = sum_{i in V} k(x_i, x_c), sel_c = sum_{j in S} k(x_j, x_c)
/// and self_c = k(x_c, x_c). A(empty) = 0.
double coverage_gain(double n, std::size_t selected, double own_c, double sum_vs, double sum_ss,
                     double sel_c, double self_c);

/// Greedy maximisation: for m = 1..M and for every group in dataset order,
/// add the unselected member with the largest marginal gain (ties go to
/// the smallest row index). For mmd-single the whole dataset is one pool and
/// M items are selected in total.
Summary greedy_select(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M);

/// Same as greedy_select but also returns the state after every pick.
struct GreedyTrace {
  Summary summary;
  std::vector<int> picks;             ///< rows in pick order
  std::vector<double> gains;          ///< gain of each pick
  std::vector<double> utilities;      ///< U(S) after each pick
};
GreedyTrace greedy_trace(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M);

}  // namespace compsumm

#endif  // COMPSUMM_GREEDY_HPP
