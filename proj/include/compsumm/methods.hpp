#ifndef COMPSUMM_METHODS_HPP
#define COMPSUMM_METHODS_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/gradopt.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm {

enum class Method {
  nn_comp_greedy,
  mmd_diff_greedy,
  mmd_div_greedy,
  mmd_diff_grad,
  mmd_div_grad,
  kmeans,
  kmedoids,
  mmd_critic,
  full,  ///< every training point; the reference classifier
};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// Whether the summariser itself depends on the kernel width / lambda.
bool uses_gamma(Method method);
bool uses_lambda(Method method);

struct Hyperparameters {
  std::optional<double> gamma;
  std::optional<double> lambda;
  std::optional<double> C;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct MethodSpec {
  Method method = Method::mmd_diff_grad;
  GradConfig grad;         ///< gradient methods; grad.seed is overridden by `seed`
  std::uint64_t seed = 0;  ///< kmeans, kmedoids and random initialisation
  /// Evaluate the objective for the provenance record (costs O(N^2)).
  bool record_value = true;
};

/// Summary of `train` with M prototypes per group (G*M items for
/// mmd-critic, every row for full). Throws ValidationError when a required
/// hyperparameter is missing.
Summary summarise(const GroupedDataset& train, const MethodSpec& spec, std::size_t M, const Hyperparameters& hp);

}  // namespace compsumm

#endif  // COMPSUMM_METHODS_HPP
