#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "compsumm/baselines.hpp"
#include "compsumm/eval.hpp"
#include "compsumm/experiment.hpp"
#include "compsumm/gradopt.hpp"
#include "compsumm/greedy.hpp"
#include "compsumm/kernel.hpp"
#include "compsumm/methods.hpp"
#include "compsumm/objectives.hpp"
#include "compsumm/parallel.hpp"

namespace py = pybind11;
using namespace compsumm;

namespace {

using Prototypes = std::vector<std::vector<int>>;

ObjectiveSpec objective(const std::string& kind, double gamma, double lambda) {
  ObjectiveSpec spec;
  spec.kind = parse_objective_kind(kind);
  spec.kernel = KernelSpec(gamma);
  spec.lambda = lambda;
  spec.validate();
  return spec;
}

Summary as_summary(const Prototypes& prototypes, const GroupedDataset& data) {
  Summary s;
  s.prototypes = prototypes;
  for (const auto& p : prototypes) s.M = std::max(s.M, p.size());
  s.validate(data);
  return s;
}

MetaPrototypes as_meta(const std::vector<Matrix>& points) {
  MetaPrototypes m;
  m.points = points;
  return m;
}

LabeledPrototypeSet labeled(const Matrix& points, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(points.rows()) != labels.size())
    throw ValidationError("points and labels differ in length");
  return {points, labels};
}

py::dict summary_dict(const Summary& s) {
  py::dict d;
  d["prototypes"] = s.prototypes;
  d["objective"] = s.provenance.objective;
  d["optimizer"] = s.provenance.optimizer;
  d["gamma"] = s.provenance.gamma;
  d["lambda"] = s.provenance.lambda;
  d["value"] = s.provenance.value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_compsumm, m) {
  m.doc() = "Comparative prototype summaries of grouped data";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<GroupedDataset>(m, "Dataset")
      .def(py::init([](const Matrix& points, const std::vector<int>& groups, std::vector<std::string> names) {
             if (names.empty()) {
               int top = -1;
               for (int g : groups) top = std::max(top, g);
               for (int g = 0; g <= top; ++g) names.push_back(std::to_string(g));
             }
             return GroupedDataset(points, groups, std::move(names));
           }),
           py::arg("points"), py::arg("groups"), py::arg("names") = std::vector<std::string>{})
      .def_property_readonly("points", &GroupedDataset::points)
      .def_property_readonly("groups", &GroupedDataset::group_labels)
      .def_property_readonly("names", &GroupedDataset::group_names)
      .def("members", &GroupedDataset::members, py::arg("group"))
      .def("__len__", &GroupedDataset::size)
      .def_property_readonly("dim", &GroupedDataset::dim)
      .def_property_readonly("num_groups", &GroupedDataset::num_groups);

  m.def("load_usps", &load_usps, py::arg("path"));
  m.def("set_workers", &set_worker_count, py::arg("workers"));

  m.def("rbf_kernel", [](const Matrix& X, const Matrix& Y, double gamma) {
    return kernel_matrix(X, Y, KernelSpec(gamma)).values();
  }, py::arg("X"), py::arg("Y"), py::arg("gamma"));
  m.def("mmd2", [](const Matrix& X, const Matrix& Y, double gamma) { return mmd2(X, Y, KernelSpec(gamma)); },
        py::arg("X"), py::arg("Y"), py::arg("gamma"));
  m.def("median_gamma", &median_gamma, py::arg("X"), py::arg("max_pairs") = kMedianPairs, py::arg("seed") = 0);

  m.def("utility",
        [](const GroupedDataset& data, const Prototypes& prototypes, const std::string& kind, double gamma,
           double lambda) { return utility(as_summary(prototypes, data), data, objective(kind, gamma, lambda)); },
        py::arg("data"), py::arg("prototypes"), py::arg("kind"), py::arg("gamma"), py::arg("lam") = 1.0);
  m.def("meta_utility",
        [](const GroupedDataset& data, const std::vector<Matrix>& meta, const std::string& kind, double gamma,
           double lambda) {
          const MetaEvaluation e = grad_meta_objective(as_meta(meta), data, objective(kind, gamma, lambda));
          return py::make_tuple(e.value, e.gradient.points);
        },
        py::arg("data"), py::arg("meta"), py::arg("kind"), py::arg("gamma"), py::arg("lam") = 1.0,
        "Value and gradient of the continuous objective at free meta points.");

  m.def("greedy_select",
        [](const GroupedDataset& data, const std::string& kind, std::size_t M, double gamma, double lambda) {
          return greedy_select(data, objective(kind, gamma, lambda), M).prototypes;
        },
        py::arg("data"), py::arg("kind"), py::arg("M"), py::arg("gamma"), py::arg("lam") = 1.0);

  m.def("optimize_meta",
        [](const GroupedDataset& data, const std::string& kind, std::size_t M, double gamma, double lambda,
           const std::string& init, std::uint64_t seed, int max_iterations) {
          GradConfig config;
          config.init = parse_meta_init(init);
          config.seed = seed;
          config.max_iterations = max_iterations;
          const MetaOptimization r = optimize_meta(data, objective(kind, gamma, lambda), M, config);
          py::dict d;
          d["meta"] = r.meta.points;
          d["initial"] = r.initial.points;
          d["initial_value"] = r.initial_value;
          d["final_value"] = r.final_value;
          d["iterations"] = r.iterations;
          d["trajectory"] = r.trajectory;
          return d;
        },
        py::arg("data"), py::arg("kind"), py::arg("M"), py::arg("gamma"), py::arg("lam") = 1.0,
        py::arg("init") = "greedy", py::arg("seed") = 0, py::arg("max_iterations") = 500);
  m.def("snap", [](const GroupedDataset& data, const std::vector<Matrix>& meta) {
    return snap(as_meta(meta), data).prototypes;
  }, py::arg("data"), py::arg("meta"));

  m.def("kmeans_summary", [](const GroupedDataset& d, std::size_t M, std::uint64_t seed) {
    return kmeans_summary(d, M, seed).prototypes;
  }, py::arg("data"), py::arg("M"), py::arg("seed") = 0);
  m.def("kmedoids_summary", [](const GroupedDataset& d, std::size_t M, std::uint64_t seed) {
    return kmedoids_summary(d, M, seed).prototypes;
  }, py::arg("data"), py::arg("M"), py::arg("seed") = 0);
  m.def("mmd_critic_summary", [](const GroupedDataset& d, std::size_t total, double gamma) {
    return mmd_critic_summary(d, total, KernelSpec(gamma)).prototypes;
  }, py::arg("data"), py::arg("total"), py::arg("gamma"));

  m.def("summarise",
        [](const GroupedDataset& data, const std::string& method, std::size_t M, std::optional<double> gamma,
           std::optional<double> lambda, std::uint64_t seed) {
          MethodSpec spec;
          spec.method = parse_method(method);
          spec.seed = seed;
          Hyperparameters hp;
          hp.gamma = gamma;
          hp.lambda = lambda;
          return summary_dict(summarise(data, spec, M, hp));
        },
        py::arg("data"), py::arg("method"), py::arg("M"), py::arg("gamma") = py::none(),
        py::arg("lam") = py::none(), py::arg("seed") = 0);

  m.def("knn1_predict", [](const Matrix& points, const std::vector<int>& labels, const Matrix& queries) {
    return knn1_predict(labeled(points, labels), queries);
  }, py::arg("points"), py::arg("labels"), py::arg("queries"));

  py::class_<SvmModel>(m, "SvmModel")
      .def_property_readonly("classes", &SvmModel::classes)
      .def("decision_values", [](const SvmModel& s, const Matrix& q) {
        Matrix out(q.rows(), static_cast<Eigen::Index>(s.classes().size()));
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
          const auto v = s.decision_values(row_span(q, i));
          for (std::size_t c = 0; c < v.size(); ++c) out(i, static_cast<Eigen::Index>(c)) = v[c];
        }
        return out;
      })
      .def("predict", [](const SvmModel& s, const Matrix& q) { return s.predict(q); })
      .def_property_readonly("dual_objectives", [](const SvmModel& s) {
        std::vector<double> out;
        for (const auto& b : s.machines()) out.push_back(b.dual_objective);
        return out;
      });
  m.def("svm_train",
        [](const Matrix& points, const std::vector<int>& labels, double C, double gamma) {
          SvmOptions o;
          o.C = C;
          o.kernel = KernelSpec(gamma);
          return svm_train(labeled(points, labels), o);
        },
        py::arg("points"), py::arg("labels"), py::arg("C"), py::arg("gamma"));

  m.def("balanced_accuracy", [](const std::vector<int>& pred, const std::vector<int>& truth) {
    return balanced_accuracy(pred, truth);
  }, py::arg("predictions"), py::arg("truth"));

  m.def("evaluate",
        [](const GroupedDataset& data, const std::vector<std::string>& methods, const std::vector<std::size_t>& Ms,
           const std::vector<std::string>& classifiers, std::size_t splits, double train_fraction, std::uint64_t seed) {
          ExperimentOptions o;
          for (const auto& name : methods) o.methods.push_back(parse_method(name));
          o.Ms = Ms;
          o.classifiers.clear();
          for (const auto& name : classifiers) o.classifiers.push_back(parse_classifier(name));
          const auto reports = run_experiment(make_splits(data, train_fraction, splits, seed), o);
          py::list out;
          for (const auto& r : reports) {
            py::dict d;
            d["method"] = std::string(to_string(r.method));
            d["M"] = r.M;
            d["classifier"] = std::string(to_string(r.classifier));
            d["per_split"] = r.per_split;
            d["mean"] = r.mean;
            d["ci95"] = r.ci95_halfwidth ? py::cast(*r.ci95_halfwidth) : py::none();
            out.append(d);
          }
          return out;
        },
        py::arg("data"), py::arg("methods"), py::arg("Ms"), py::arg("classifiers") = std::vector<std::string>{"1nn"},
        py::arg("splits") = 10, py::arg("train_fraction") = 0.8, py::arg("seed") = 0,
        "Balanced accuracy of each method's prototypes over random stratified splits.");
}
