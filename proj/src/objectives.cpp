#include "compsumm/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace compsumm {

namespace {

double kernel_sum(const Matrix& X, const Matrix& Y, const KernelSpec& spec) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto xi = row_span(X, i);
    for (Eigen::Index j = 0; j < Y.rows(); ++j) total += std::exp(-spec.gamma() * squared_distance(xi, row_span(Y, j)));
  }
  return total;
}

double self_kernel_sum(const Matrix& X, const KernelSpec& spec) {
  double off = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto xi = row_span(X, i);
    for (Eigen::Index j = i + 1; j < X.rows(); ++j) off += std::exp(-spec.gamma() * squared_distance(xi, row_span(X, j)));
  }
  return static_cast<double>(X.rows()) + 2.0 * off;
}

std::vector<int> non_members(const GroupedDataset& data, std::size_t g) {
  std::vector<int> rows;
  rows.reserve(data.size() - data.group_size(g));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (static_cast<std::size_t>(data.group_of(i)) != g) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

void require_other_groups(const GroupedDataset& data, const ObjectiveSpec& spec) {
  if (data.num_groups() < 2 && spec.lambda > 0.0) {
    throw ValidationError("objective " + std::string(to_string(spec.kind)) +
                          " with lambda > 0 needs at least two groups");
  }
}

double summed(const std::vector<Matrix>& per_group, const GroupedDataset& data, const ObjectiveSpec& spec) {
  if (per_group.size() != data.num_groups()) throw ValidationError("prototype group count does not match dataset");
  double total = 0.0;
  for (std::size_t g = 0; g < per_group.size(); ++g) total += group_utility(per_group[g], g, data, spec);
  return total;
}

std::vector<Matrix> gather_groups(const Summary& summary, const GroupedDataset& data) {
  summary.validate(data);
  std::vector<Matrix> out;
  out.reserve(summary.prototypes.size());
  for (const auto& rows : summary.prototypes) out.push_back(data.gather(rows));
  return out;
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::nn: return "nn";
    case ObjectiveKind::mmd_diff: return "mmd-diff";
    case ObjectiveKind::mmd_div: return "mmd-div";
    case ObjectiveKind::mmd_single: return "mmd-single";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "nn") return ObjectiveKind::nn;
  if (name == "mmd-diff") return ObjectiveKind::mmd_diff;
  if (name == "mmd-div") return ObjectiveKind::mmd_div;
  if (name == "mmd-single") return ObjectiveKind::mmd_single;
  throw ValidationError("unknown objective '" + std::string(name) + "'");
}

void ObjectiveSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be finite and nonnegative");
}

std::size_t Summary::total() const {
  std::size_t n = 0;
  for (const auto& rows : prototypes) n += rows.size();
  return n;
}

void Summary::validate(const GroupedDataset& data) const {
  if (prototypes.size() != data.num_groups()) throw ValidationError("summary group count does not match dataset");
  for (std::size_t g = 0; g < prototypes.size(); ++g) {
    std::set<int> seen;
    for (const int r : prototypes[g]) {
      if (r < 0 || static_cast<std::size_t>(r) >= data.size()) throw ValidationError("summary row out of range");
      if (static_cast<std::size_t>(data.group_of(static_cast<std::size_t>(r))) != g) {
        throw ValidationError("summary row " + std::to_string(r) + " is not in group " + data.group_names()[g]);
      }
      if (!seen.insert(r).second) throw ValidationError("duplicate prototype row " + std::to_string(r));
    }
  }
}

MetaPrototypes MetaPrototypes::from_summary(const Summary& summary, const GroupedDataset& data) {
  summary.validate(data);
  MetaPrototypes meta;
  for (const auto& rows : summary.prototypes) meta.points.push_back(data.gather(rows));
  return meta;
}

bool MetaPrototypes::all_finite() const {
  return std::all_of(points.begin(), points.end(), [](const Matrix& m) { return m.allFinite(); });
}

double mmd2(const Matrix& X, const Matrix& Y, const KernelSpec& spec) {
  if (X.rows() == 0 || Y.rows() == 0) throw ValidationError("mmd2: empty input");
  if (X.cols() != Y.cols()) throw ValidationError("mmd2: dimension mismatch");
  const auto n = static_cast<double>(X.rows());
  const auto m = static_cast<double>(Y.rows());
  return self_kernel_sum(X, spec) / (n * n) - 2.0 * kernel_sum(X, Y, spec) / (n * m) +
         self_kernel_sum(Y, spec) / (m * m);
}

double group_utility(const Matrix& protos, std::size_t g, const GroupedDataset& data, const ObjectiveSpec& spec) {
  if (protos.rows() == 0) {
    throw ValidationError("group '" + data.group_names()[g] + "' has no prototypes");
  }
  const Matrix own = data.gather(data.members(g));
  switch (spec.kind) {
    case ObjectiveKind::nn: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < own.rows(); ++i) {
        double best = 0.0;
        for (Eigen::Index m = 0; m < protos.rows(); ++m) best = std::max(best, rbf(row_span(protos, m), row_span(own, i), spec.kernel));
        total += best;
      }
      return total;
    }
    case ObjectiveKind::mmd_diff: {
      double value = -mmd2(protos, own, spec.kernel);
      if (spec.lambda > 0.0) {
        require_other_groups(data, spec);
        value += spec.lambda * mmd2(protos, data.gather(non_members(data, g)), spec.kernel);
      }
      return value;
    }
    case ObjectiveKind::mmd_div: {
      double value = -mmd2(protos, own, spec.kernel);
      if (spec.lambda > 0.0) {
        require_other_groups(data, spec);
        const Matrix others = data.gather(non_members(data, g));
        const double mean = kernel_sum(protos, others, spec.kernel) /
                            (static_cast<double>(protos.rows()) * static_cast<double>(others.rows()));
        value -= 2.0 * spec.lambda * mean;
      }
      return value;
    }
    case ObjectiveKind::mmd_single:
      break;
  }
  throw ValidationError("group_utility does not apply to mmd-single");
}

double utility_nn(const Summary& summary, const GroupedDataset& data, const KernelSpec& spec) {
  return summed(gather_groups(summary, data), data, ObjectiveSpec{ObjectiveKind::nn, 0.0, spec});
}

double utility_diff(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec) {
  spec.validate();
  require_other_groups(data, spec);
  return summed(gather_groups(summary, data), data, {ObjectiveKind::mmd_diff, spec.lambda, spec.kernel});
}

double utility_diff(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec) {
  spec.validate();
  require_other_groups(data, spec);
  return summed(meta.points, data, {ObjectiveKind::mmd_diff, spec.lambda, spec.kernel});
}

double utility_div(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec) {
  spec.validate();
  require_other_groups(data, spec);
  return summed(gather_groups(summary, data), data, {ObjectiveKind::mmd_div, spec.lambda, spec.kernel});
}

double utility_div(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec) {
  spec.validate();
  require_other_groups(data, spec);
  return summed(meta.points, data, {ObjectiveKind::mmd_div, spec.lambda, spec.kernel});
}

double utility_single(const Summary& summary, const GroupedDataset& data, const KernelSpec& spec) {
  summary.validate(data);
  std::vector<int> rows;
  for (const auto& group_rows : summary.prototypes) rows.insert(rows.end(), group_rows.begin(), group_rows.end());
  if (rows.empty()) throw ValidationError("summary has no prototypes");
  return -mmd2(data.gather(rows), data.points(), spec);
}

double utility(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::nn: return utility_nn(summary, data, spec.kernel);
    case ObjectiveKind::mmd_diff: return utility_diff(summary, data, spec);
    case ObjectiveKind::mmd_div: return utility_div(summary, data, spec);
    case ObjectiveKind::mmd_single: return utility_single(summary, data, spec.kernel);
  }
  throw ValidationError("unknown objective kind");
}

double utility(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::mmd_diff: return utility_diff(meta, data, spec);
    case ObjectiveKind::mmd_div: return utility_div(meta, data, spec);
    default: break;
  }
  throw ValidationError("objective " + std::string(to_string(spec.kind)) + " has no continuous form");
}

double empty_selection_value(const GroupedDataset& data, const ObjectiveSpec& spec) {
  spec.validate();
  if (spec.kind == ObjectiveKind::nn) return 0.0;
  if (spec.kind == ObjectiveKind::mmd_single) {
    const auto n = static_cast<double>(data.size());
    return -self_kernel_sum(data.points(), spec.kernel) / (n * n);
  }
  require_other_groups(data, spec);
  double total = 0.0;
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    const auto n = static_cast<double>(data.group_size(g));
    total -= self_kernel_sum(data.gather(data.members(g)), spec.kernel) / (n * n);
    if (spec.kind == ObjectiveKind::mmd_diff && spec.lambda > 0.0) {
      const Matrix others = data.gather(non_members(data, g));
      const auto m = static_cast<double>(others.rows());
      total += spec.lambda * self_kernel_sum(others, spec.kernel) / (m * m);
    }
  }
  return total;
}

}  // namespace compsumm
