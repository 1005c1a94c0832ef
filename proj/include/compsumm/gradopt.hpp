#ifndef COMPSUMM_GRADOPT_HPP
#define COMPSUMM_GRADOPT_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/lbfgs.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm {

enum class MetaInit { greedy, kmeans, random };

std::string_view to_string(MetaInit init);
MetaInit parse_meta_init(std::string_view name);

struct GradConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;  ///< infinity norm
  int history_size = 10;
  MetaInit init = MetaInit::greedy;
  std::uint64_t seed = 0;  ///< kmeans and random initialisation

  void validate() const;
};

struct MetaEvaluation {
  double value = 0.0;
  MetaPrototypes gradient;
};

/// The continuous objective for mmd-diff / mmd-div over free meta points.
///
/// Selection-independent constants are computed once at construction so the
/// value equals utility() exactly; each evaluation then costs
/// O(G M (N + M) d).
class MetaObjective {
 public:
  MetaObjective(const GroupedDataset& data, const ObjectiveSpec& spec);

  MetaEvaluation evaluate(const MetaPrototypes& meta) const;
  double value(const MetaPrototypes& meta) const;

  const GroupedDataset& data() const { return data_; }
  const ObjectiveSpec& spec() const { return spec_; }

 private:
  double group_value(const Matrix& protos, std::size_t g, Matrix* grad) const;

  const GroupedDataset& data_;
  ObjectiveSpec spec_;
  std::vector<double> constants_;
};

MetaEvaluation grad_meta_objective(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec);

struct MetaOptimization {
  MetaPrototypes meta;
  MetaPrototypes initial;
  double initial_value = 0.0;
  double final_value = 0.0;
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
  std::vector<double> trajectory;  ///< objective after each accepted step
};

/// Starting meta points for the configured initialisation: greedy on the same
/// objective, k-means centres per group, or M distinct random members.
MetaPrototypes initial_meta(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M,
                            const GradConfig& config);

/// Quasi-Newton ascent on the meta objective from `init`.
MetaOptimization optimize_meta_from(const GroupedDataset& data, const ObjectiveSpec& spec, MetaPrototypes init,
                                    const GradConfig& config);

MetaOptimization optimize_meta(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M,
                               const GradConfig& config);

/// Maps meta point i of group g to the nearest (squared Euclidean) unused
/// member of g, processing i = 1..M in order; ties go to the smallest row.
Summary snap(const MetaPrototypes& meta, const GroupedDataset& data);

namespace testing {
/// Multiplies every analytic gradient by (1 + factor). Zero disables it.
/// Used by selftest to check that a broken gradient is detected.
void set_gradient_fault(double factor);
}  // namespace testing

}  // namespace compsumm

#endif  // COMPSUMM_GRADOPT_HPP
