#include "compsumm/methods.hpp"

#include <string>

#include "compsumm/baselines.hpp"
#include "compsumm/greedy.hpp"

namespace compsumm {

namespace {

double require(const std::optional<double>& v, Method m, const char* name) {
  if (!v) throw ValidationError(std::string("method ") + std::string(to_string(m)) + " needs " + name);
  return *v;
}

ObjectiveSpec objective_for(Method m, const Hyperparameters& hp) {
  ObjectiveSpec spec;
  switch (m) {
    case Method::nn_comp_greedy: spec.kind = ObjectiveKind::nn; break;
    case Method::mmd_diff_greedy:
    case Method::mmd_diff_grad: spec.kind = ObjectiveKind::mmd_diff; break;
    case Method::mmd_div_greedy:
    case Method::mmd_div_grad: spec.kind = ObjectiveKind::mmd_div; break;
    default: throw ValidationError("method " + std::string(to_string(m)) + " has no objective");
  }
  spec.kernel = KernelSpec(require(hp.gamma, m, "gamma"));
  spec.lambda = uses_lambda(m) ? require(hp.lambda, m, "lambda") : 0.0;
  spec.validate();
  return spec;
}

void stamp(Summary& s, const ObjectiveSpec& spec, const char* optimizer, const GroupedDataset& data, bool value) {
  s.provenance.objective = std::string(to_string(spec.kind));
  s.provenance.optimizer = optimizer;
  s.provenance.gamma = spec.kernel.gamma();
  s.provenance.lambda = spec.lambda;
  if (value) s.provenance.value = utility(s, data, spec);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::nn_comp_greedy: return "nn-comp-greedy";
    case Method::mmd_diff_greedy: return "mmd-diff-greedy";
    case Method::mmd_div_greedy: return "mmd-div-greedy";
    case Method::mmd_diff_grad: return "mmd-diff-grad";
    case Method::mmd_div_grad: return "mmd-div-grad";
    case Method::kmeans: return "kmeans";
    case Method::kmedoids: return "kmedoids";
    case Method::mmd_critic: return "mmd-critic";
    case Method::full: return "full";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown method '" + std::string(name) + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::nn_comp_greedy, Method::mmd_diff_greedy, Method::mmd_div_greedy,
                                           Method::mmd_diff_grad,  Method::mmd_div_grad,    Method::kmeans,
                                           Method::kmedoids,       Method::mmd_critic,      Method::full};
  return methods;
}

bool uses_gamma(Method method) {
  return method != Method::kmeans && method != Method::kmedoids && method != Method::full;
}

bool uses_lambda(Method method) {
  switch (method) {
    case Method::mmd_diff_greedy:
    case Method::mmd_div_greedy:
    case Method::mmd_diff_grad:
    case Method::mmd_div_grad: return true;
    default: return false;
  }
}

Summary summarise(const GroupedDataset& train, const MethodSpec& spec, std::size_t M, const Hyperparameters& hp) {
  const Method m = spec.method;
  switch (m) {
    case Method::nn_comp_greedy:
    case Method::mmd_diff_greedy:
    case Method::mmd_div_greedy: {
      const ObjectiveSpec obj = objective_for(m, hp);
      Summary s = greedy_select(train, obj, M);
      stamp(s, obj, "greedy", train, spec.record_value);
      return s;
    }
    case Method::mmd_diff_grad:
    case Method::mmd_div_grad: {
      const ObjectiveSpec obj = objective_for(m, hp);
      GradConfig config = spec.grad;
      config.seed = spec.seed;
      Summary s = snap(optimize_meta(train, obj, M, config).meta, train);
      s.M = M;
      stamp(s, obj, "gradient", train, spec.record_value);
      return s;
    }
    case Method::kmeans: return kmeans_summary(train, M, spec.seed);
    case Method::kmedoids: return kmedoids_summary(train, M, spec.seed);
    case Method::mmd_critic: {
      const KernelSpec kernel(require(hp.gamma, m, "gamma"));
      return mmd_critic_summary(train, train.num_groups() * M, kernel);
    }
    case Method::full: {
      Summary s;
      s.M = M;
      for (std::size_t g = 0; g < train.num_groups(); ++g) s.prototypes.push_back(train.members(g));
      s.provenance.objective = "full";
      s.provenance.optimizer = "none";
      return s;
    }
  }
  throw ValidationError("unknown method");
}

}  // namespace compsumm
