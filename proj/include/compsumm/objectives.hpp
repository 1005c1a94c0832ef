#ifndef COMPSUMM_OBJECTIVES_HPP
#define COMPSUMM_OBJECTIVES_HPP

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "compsumm/common.hpp"
#include "compsumm/corpus.hpp"
#include "compsumm/kernel.hpp"

namespace compsumm {

enum class ObjectiveKind {
  nn,          ///< nearest-neighbour coverage
  mmd_diff,    ///< -MMD^2(own group) + lambda * MMD^2(other groups)
  mmd_div,     ///< -MMD^2(own group) - 2 lambda * mean kernel to other groups
  mmd_single,  ///< -MMD^2(all prototypes, all data), labels ignored
};

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::mmd_diff;
  double lambda = 1.0;  ///< unused by nn and mmd_single
  KernelSpec kernel{1.0};

  void validate() const;
};

struct Provenance {
  std::string objective;
  std::string optimizer;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
};

/// Per-group prototype row indices into a dataset, in selection order.
struct Summary {
  std::vector<std::vector<int>> prototypes;
  std::size_t M = 0;
  Provenance provenance;

  std::size_t total() const;
  /// Throws ValidationError if an index is out of range, outside its group,
  /// or duplicated within a group.
  void validate(const GroupedDataset& data) const;
};

/// Free points in feature space, one M x d matrix per group.
struct MetaPrototypes {
  std::vector<Matrix> points;

  /// Meta points placed exactly on the summary's rows.
  static MetaPrototypes from_summary(const Summary& summary, const GroupedDataset& data);
  std::size_t num_groups() const { return points.size(); }
  bool all_finite() const;
};

/// Empirical MMD^2 (biased V-statistic) between the rows of X and Y.
double mmd2(const Matrix& X, const Matrix& Y, const KernelSpec& spec);

/// Sum over groups and group members of the best kernel similarity to a
/// prototype of the same group.
double utility_nn(const Summary& summary, const GroupedDataset& data, const KernelSpec& spec);

double utility_diff(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec);
double utility_diff(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec);

double utility_div(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec);
double utility_div(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec);

/// -MMD^2 between the union of all prototypes and the whole dataset.
double utility_single(const Summary& summary, const GroupedDataset& data, const KernelSpec& spec);

/// Dispatches on spec.kind.
double utility(const Summary& summary, const GroupedDataset& data, const ObjectiveSpec& spec);
/// mmd_diff and mmd_div only.
double utility(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec);

/// Contribution of group g alone, for the prototype rows `protos` of g.
/// utility() is the sum of these over groups (nn, mmd_diff, mmd_div).
double group_utility(const Matrix& protos, std::size_t g, const GroupedDataset& data, const ObjectiveSpec& spec);

/// The value the objective assigns to an empty selection: the terms that do
/// not depend on the prototypes (for example the data-data kernel mean
/// inside MMD^2). Zero for nn. Greedy gains start from this value.
double empty_selection_value(const GroupedDataset& data, const ObjectiveSpec& spec);

}  // namespace compsumm

#endif  // COMPSUMM_OBJECTIVES_HPP
