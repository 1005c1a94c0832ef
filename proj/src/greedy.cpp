#include "compsumm/greedy.hpp"

#include <algorithm>
#include <cmath>

#include "compsumm/parallel.hpp"

namespace compsumm {

namespace {

bool uses_other_groups(const ObjectiveSpec& spec) {
  return (spec.kind == ObjectiveKind::mmd_diff || spec.kind == ObjectiveKind::mmd_div) && spec.lambda > 0.0;
}

// Selection-dependent part of -MMD^2(X_S, X_V); zero for the empty set.
double coverage_value(double n, std::size_t m, double sum_vs, double sum_ss) {
  if (m == 0) return 0.0;
  const auto s = static_cast<double>(m);
  return 2.0 * sum_vs / (n * s) - sum_ss / (s * s);
}

void validate_budget(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M) {
  if (M == 0) throw ValidationError("M must be at least 1");
  if (spec.kind == ObjectiveKind::mmd_single) {
    if (M > data.size()) {
      throw ValidationError("M = " + std::to_string(M) + " exceeds the dataset size " + std::to_string(data.size()));
    }
    return;
  }
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    if (M > data.group_size(g)) {
      throw ValidationError("M = " + std::to_string(M) + " exceeds the size " + std::to_string(data.group_size(g)) +
                            " of group '" + data.group_names()[g] + "'");
    }
  }
}

}  // namespace

double coverage_gain(double n, std::size_t selected, double own_c, double sum_vs, double sum_ss, double sel_c,
                     double self_c) {
  if (selected == 0) return 2.0 * own_c / n - self_c;
  const auto s = static_cast<double>(selected);
  return (2.0 * own_c / n - 2.0 * sum_vs / (n * s) + (2.0 * s + 1.0) / (s * s * (s + 1.0)) * sum_ss -
          2.0 * sel_c / (s + 1.0) - self_c / (s + 1.0)) /
         (s + 1.0);
}

GreedyState::GreedyState(const GroupedDataset& data, const ObjectiveSpec& spec) : data_(data), spec_(spec) {
  spec_.validate();
  if (uses_other_groups(spec_) && data.num_groups() < 2) {
    throw ValidationError("objective " + std::string(to_string(spec_.kind)) + " with lambda > 0 needs two groups");
  }

  const std::size_t n = data.size();
  pool_of_.assign(n, 0);
  local_of_.assign(n, 0);
  if (spec_.kind == ObjectiveKind::mmd_single) {
    Pool pool;
    for (std::size_t i = 0; i < n; ++i) pool.rows.push_back(static_cast<int>(i));
    pools_.push_back(std::move(pool));
  } else {
    for (std::size_t g = 0; g < data.num_groups(); ++g) {
      Pool pool;
      pool.rows = data.members(g);
      pools_.push_back(std::move(pool));
    }
  }
  for (std::size_t p = 0; p < pools_.size(); ++p) {
    for (std::size_t l = 0; l < pools_[p].rows.size(); ++l) {
      pool_of_[static_cast<std::size_t>(pools_[p].rows[l])] = p;
      local_of_[static_cast<std::size_t>(pools_[p].rows[l])] = l;
    }
  }

  const bool need_other = uses_other_groups(spec_);
  const double gamma = spec_.kernel.gamma();
  for (auto& pool : pools_) {
    const auto size = static_cast<Eigen::Index>(pool.rows.size());
    pool.taken.assign(pool.rows.size(), 0);
    pool.sel = Vector::Zero(size);
    pool.own = Vector::Zero(size);
    pool.other = Vector::Zero(size);
    if (spec_.kind == ObjectiveKind::nn) {
      pool.best = Vector::Zero(size);
      pool.block = kernel_matrix(data.gather(pool.rows), spec_.kernel);
      pool.own = pool.block->values().rowwise().sum();
    }
  }

  if (spec_.kind != ObjectiveKind::nn) {
    // One pass per row over all rows: split each kernel row into own-pool and
    // other-pool sums.
    std::vector<double> own(n, 0.0);
    std::vector<double> other(n, 0.0);
    parallel_for(n, [&](std::size_t c) {
      const std::size_t pc = pool_of_[c];
      const auto xc = data.row(c);
      double own_sum = 0.0;
      double other_sum = 0.0;
      if (need_other) {
        for (std::size_t i = 0; i < n; ++i) {
          const double k = std::exp(-gamma * squared_distance(data.row(i), xc));
          (pool_of_[i] == pc ? own_sum : other_sum) += k;
        }
      } else {
        for (const int i : pools_[pc].rows) own_sum += std::exp(-gamma * squared_distance(data.row(static_cast<std::size_t>(i)), xc));
      }
      own[c] = own_sum;
      other[c] = other_sum;
    });
    for (std::size_t c = 0; c < n; ++c) {
      auto& pool = pools_[pool_of_[c]];
      pool.own(static_cast<Eigen::Index>(local_of_[c])) = own[c];
      pool.other(static_cast<Eigen::Index>(local_of_[c])) = other[c];
    }
  }

  double all_pairs = 0.0;
  for (auto& pool : pools_) {
    pool.own_total = pool.own.sum();
    all_pairs += pool.own_total + pool.other.sum();
    pool.other_count = static_cast<double>(n - pool.rows.size());
  }
  for (auto& pool : pools_) pool.other_total = all_pairs - pool.own_total - 2.0 * pool.other.sum();

  empty_value_ = 0.0;
  for (const auto& pool : pools_) empty_value_ += pool_constant(pool);
}

double GreedyState::pool_constant(const Pool& pool) const {
  if (spec_.kind == ObjectiveKind::nn) return 0.0;
  const auto n = static_cast<double>(pool.rows.size());
  double c = -pool.own_total / (n * n);
  if (spec_.kind == ObjectiveKind::mmd_diff && spec_.lambda > 0.0) {
    c += spec_.lambda * pool.other_total / (pool.other_count * pool.other_count);
  }
  return c;
}

double GreedyState::pool_value(const Pool& pool) const {
  if (spec_.kind == ObjectiveKind::nn) return pool.best.sum();
  const std::size_t m = pool.selected.size();
  const auto n = static_cast<double>(pool.rows.size());
  double value = coverage_value(n, m, pool.sum_vs, pool.sum_ss);
  if (m > 0 && uses_other_groups(spec_)) {
    if (spec_.kind == ObjectiveKind::mmd_diff) {
      value -= spec_.lambda * coverage_value(pool.other_count, m, pool.sum_cross, pool.sum_ss);
    } else {
      value -= 2.0 * spec_.lambda * pool.sum_cross / (static_cast<double>(m) * pool.other_count);
    }
  }
  return value;
}

double GreedyState::marginal_gain(int candidate) const {
  if (candidate < 0 || static_cast<std::size_t>(candidate) >= data_.size()) {
    throw ValidationError("candidate row out of range");
  }
  const Pool& pool = pools_[pool_of_[static_cast<std::size_t>(candidate)]];
  const auto c = static_cast<Eigen::Index>(local_of_[static_cast<std::size_t>(candidate)]);
  if (pool.taken[static_cast<std::size_t>(c)]) {
    throw ValidationError("candidate row " + std::to_string(candidate) + " is already selected");
  }

  if (spec_.kind == ObjectiveKind::nn) {
    const auto row = pool.block->row(static_cast<std::size_t>(c));
    double gain = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) gain += std::max(0.0, row[i] - pool.best(static_cast<Eigen::Index>(i)));
    return gain;
  }

  const std::size_t m = pool.selected.size();
  const auto n = static_cast<double>(pool.rows.size());
  double gain = coverage_gain(n, m, pool.own(c), pool.sum_vs, pool.sum_ss, pool.sel(c), 1.0);
  if (uses_other_groups(spec_)) {
    if (spec_.kind == ObjectiveKind::mmd_diff) {
      // lambda * MMD^2(X_S, X_other) has selection part -A_other(S).
      gain -= spec_.lambda *
              coverage_gain(pool.other_count, m, pool.other(c), pool.sum_cross, pool.sum_ss, pool.sel(c), 1.0);
    } else {
      const auto s = static_cast<double>(m);
      const double before = m == 0 ? 0.0 : pool.sum_cross / (s * pool.other_count);
      const double after = (pool.sum_cross + pool.other(c)) / ((s + 1.0) * pool.other_count);
      gain -= 2.0 * spec_.lambda * (after - before);
    }
  }
  return gain;
}

std::vector<double> GreedyState::kernel_row(const Pool& pool, int row) const {
  if (pool.block) {
    const auto r = pool.block->row(local_of_[static_cast<std::size_t>(row)]);
    return {r.begin(), r.end()};
  }
  std::vector<double> out(pool.rows.size());
  const auto x = data_.row(static_cast<std::size_t>(row));
  const double gamma = spec_.kernel.gamma();
  for (std::size_t i = 0; i < pool.rows.size(); ++i) {
    out[i] = std::exp(-gamma * squared_distance(data_.row(static_cast<std::size_t>(pool.rows[i])), x));
  }
  return out;
}

void GreedyState::add(int candidate) {
  // Validates the candidate.
  (void)marginal_gain(candidate);
  Pool& pool = pools_[pool_of_[static_cast<std::size_t>(candidate)]];
  const auto c = static_cast<Eigen::Index>(local_of_[static_cast<std::size_t>(candidate)]);

  pool.sum_vs += pool.own(c);
  pool.sum_ss += 2.0 * pool.sel(c) + 1.0;
  pool.sum_cross += pool.other(c);
  const auto row = kernel_row(pool, candidate);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto li = static_cast<Eigen::Index>(i);
    pool.sel(li) += row[i];
    if (spec_.kind == ObjectiveKind::nn) pool.best(li) = std::max(pool.best(li), row[i]);
  }
  pool.taken[static_cast<std::size_t>(c)] = 1;
  pool.selected.push_back(candidate);
}

double GreedyState::selection_value() const {
  double total = 0.0;
  for (const auto& pool : pools_) total += pool_value(pool);
  return total;
}

double GreedyState::utility() const { return empty_value_ + selection_value(); }

bool GreedyState::is_selected(int row) const {
  const Pool& pool = pools_[pool_of_[static_cast<std::size_t>(row)]];
  return pool.taken[local_of_[static_cast<std::size_t>(row)]] != 0;
}

Summary GreedyState::summary(std::size_t M) const {
  Summary out;
  out.M = M;
  out.prototypes.assign(data_.num_groups(), {});
  for (const auto& pool : pools_) {
    for (const int r : pool.selected) out.prototypes[static_cast<std::size_t>(data_.group_of(static_cast<std::size_t>(r)))].push_back(r);
  }
  out.provenance.objective = std::string(to_string(spec_.kind));
  out.provenance.optimizer = "greedy";
  out.provenance.gamma = spec_.kernel.gamma();
  if (spec_.kind == ObjectiveKind::mmd_diff || spec_.kind == ObjectiveKind::mmd_div) out.provenance.lambda = spec_.lambda;
  out.provenance.value = utility();
  return out;
}

double GreedyState::max_cache_deviation() const {
  const double gamma = spec_.kernel.gamma();
  auto k = [&](int a, int b) {
    return std::exp(-gamma * squared_distance(data_.row(static_cast<std::size_t>(a)), data_.row(static_cast<std::size_t>(b))));
  };
  double worst = 0.0;
  auto track = [&](double cached, double fresh) { worst = std::max(worst, std::abs(cached - fresh)); };

  for (std::size_t p = 0; p < pools_.size(); ++p) {
    const Pool& pool = pools_[p];
    double vs = 0.0, ss = 0.0, cross = 0.0;
    for (const int j : pool.selected) {
      for (const int i : pool.rows) vs += k(i, j);
      for (const int i : pool.selected) ss += k(i, j);
      if (uses_other_groups(spec_)) {
        for (std::size_t i = 0; i < data_.size(); ++i) {
          if (pool_of_[i] != p) cross += k(static_cast<int>(i), j);
        }
      }
    }
    track(pool.sum_vs, vs);
    track(pool.sum_ss, ss);
    track(pool.sum_cross, cross);
    for (std::size_t l = 0; l < pool.rows.size(); ++l) {
      const int c = pool.rows[l];
      const auto li = static_cast<Eigen::Index>(l);
      double own = 0.0, sel = 0.0, best = 0.0;
      for (const int i : pool.rows) own += k(i, c);
      for (const int j : pool.selected) {
        sel += k(j, c);
        best = std::max(best, k(j, c));
      }
      track(pool.own(li), own);
      track(pool.sel(li), sel);
      if (spec_.kind == ObjectiveKind::nn) track(pool.best(li), best);
      if (uses_other_groups(spec_)) {
        double other = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
          if (pool_of_[i] != p) other += k(static_cast<int>(i), c);
        }
        track(pool.other(li), other);
      }
    }
  }
  return worst;
}

GreedyTrace greedy_trace(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M) {
  validate_budget(data, spec, M);
  GreedyState state(data, spec);
  GreedyTrace trace;
  const bool parallel_scan = spec.kind == ObjectiveKind::nn;

  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t p = 0; p < state.num_pools(); ++p) {
      const auto& rows = state.pool_rows(p);
      std::vector<double> gains(rows.size(), -std::numeric_limits<double>::infinity());
      auto score = [&](std::size_t l) {
        if (!state.is_selected(rows[l])) gains[l] = state.marginal_gain(rows[l]);
      };
      if (parallel_scan) {
        parallel_for(rows.size(), score);
      } else {
        for (std::size_t l = 0; l < rows.size(); ++l) score(l);
      }
      // Rows are ascending, so the first maximum is the smallest row index.
      std::size_t best = rows.size();
      for (std::size_t l = 0; l < rows.size(); ++l) {
        if (state.is_selected(rows[l])) continue;
        if (best == rows.size() || gains[l] > gains[best]) best = l;
      }
      if (best == rows.size()) throw NumericError("greedy: no candidate left in pool");
      state.add(rows[best]);
      trace.picks.push_back(rows[best]);
      trace.gains.push_back(gains[best]);
      trace.utilities.push_back(state.utility());
    }
  }
  trace.summary = state.summary(M);
  return trace;
}

Summary greedy_select(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M) {
  return greedy_trace(data, spec, M).summary;
}

}  // namespace compsumm
