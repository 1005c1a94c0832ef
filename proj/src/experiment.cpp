#include "compsumm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "compsumm/kernel.hpp"
#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"

namespace compsumm {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt("%.10g", *v) : std::string(); }

template <typename T>
std::vector<std::optional<T>> axis(bool searched, const std::vector<T>& values, const char* name) {
  if (!searched) return {std::nullopt};
  if (values.empty()) throw ValidationError(std::string("empty ") + name + " grid");
  return {values.begin(), values.end()};
}

}  // namespace

std::string_view to_string(Classifier c) { return c == Classifier::knn1 ? "1nn" : "svm"; }

Classifier parse_classifier(std::string_view name) {
  if (name == "1nn" || name == "knn1" || name == "1-nn") return Classifier::knn1;
  if (name == "svm") return Classifier::svm;
  throw ValidationError("unknown classifier '" + std::string(name) + "'");
}

HyperGrid default_grid(const GroupedDataset& train, std::uint64_t seed) {
  const double med = median_gamma(train.points(), kMedianPairs, seed);
  HyperGrid grid;
  for (const double f : {0.25, 0.5, 1.0, 2.0, 4.0}) grid.gamma.push_back(med * f);
  grid.lambda = {0.5, 1.0, 2.0};
  grid.C = {0.1, 1.0, 10.0, 100.0};
  return grid;
}

bool searches_gamma(Method method, Classifier classifier) {
  return uses_gamma(method) || classifier == Classifier::svm;
}
bool searches_lambda(Method method, Classifier) { return uses_lambda(method); }
bool searches_C(Method, Classifier classifier) { return classifier == Classifier::svm; }

std::vector<int> stratified_folds(const GroupedDataset& data, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  std::vector<int> out(data.size(), 0);
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    if (data.group_size(g) < folds) {
      throw ValidationError("group '" + data.group_names()[g] + "' has " + std::to_string(data.group_size(g)) +
                            " points, fewer than " + std::to_string(folds) + " folds");
    }
    std::vector<int> members = data.members(g);
    Rng rng(derive_seed(seed, g));
    rng.shuffle(std::span<int>(members));
    for (std::size_t k = 0; k < members.size(); ++k) out[static_cast<std::size_t>(members[k])] = static_cast<int>(k % folds);
  }
  return out;
}

std::vector<int> classify(const LabeledPrototypeSet& train_set, const Matrix& queries, Classifier classifier,
                          const Hyperparameters& hp) {
  if (classifier == Classifier::knn1) return knn1_predict(train_set, queries);
  const std::vector<int> classes = train_set.classes();
  if (classes.size() < 2) return std::vector<int>(static_cast<std::size_t>(queries.rows()), classes.at(0));
  if (!hp.gamma || !hp.C) throw ValidationError("svm needs gamma and C");
  SvmOptions options;
  options.C = *hp.C;
  options.kernel = KernelSpec(*hp.gamma);
  return svm_train(train_set, options).predict(queries);
}

CvResult grid_search_cv(const GroupedDataset& train, const MethodSpec& method, std::size_t M, Classifier classifier,
                        const HyperGrid& grid, std::size_t folds, std::uint64_t seed) {
  const Method m = method.method;
  const auto gammas = axis(searches_gamma(m, classifier), grid.gamma, "gamma");
  const auto lambdas = axis(searches_lambda(m, classifier), grid.lambda, "lambda");
  const auto Cs = axis(searches_C(m, classifier), grid.C, "C");

  CvResult result;
  for (const auto& g : gammas) {
    for (const auto& l : lambdas) {
      for (const auto& c : Cs) result.cells.push_back({{g, l, c}, std::numeric_limits<double>::quiet_NaN()});
    }
  }
  if (result.cells.size() == 1) {
    result.chosen = result.cells[0].params;
    return result;
  }

  const std::vector<int> fold_of = stratified_folds(train, folds, seed);
  std::vector<GroupedDataset> fit, held;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<int> in, out;
    for (std::size_t i = 0; i < train.size(); ++i) {
      (static_cast<std::size_t>(fold_of[i]) == f ? out : in).push_back(static_cast<int>(i));
    }
    fit.push_back(train.subset(in));
    held.push_back(train.subset(out));
  }

  // Summaries depend on C never, and on gamma only when the method uses it.
  const std::size_t n_g = uses_gamma(m) ? gammas.size() : 1;
  const std::size_t n_l = lambdas.size();
  MethodSpec quiet = method;
  quiet.record_value = false;
  std::vector<Summary> summaries(folds * n_g * n_l);
  parallel_for(summaries.size(), [&](std::size_t t) {
    const std::size_t f = t / (n_g * n_l);
    const std::size_t gi = (t / n_l) % n_g;
    const std::size_t li = t % n_l;
    summaries[t] = summarise(fit[f], quiet, M, {gammas[gi], lambdas[li], std::nullopt});
  });

  const std::size_t cells = result.cells.size();
  std::vector<double> scores(folds * cells, 0.0);
  parallel_for(scores.size(), [&](std::size_t t) {
    const std::size_t f = t / cells;
    const std::size_t cell = t % cells;
    const std::size_t li = (cell / Cs.size()) % n_l;
    const std::size_t gi = uses_gamma(m) ? cell / (Cs.size() * n_l) : 0;
    const LabeledPrototypeSet set = LabeledPrototypeSet::from_summary(summaries[(f * n_g + gi) * n_l + li], fit[f]);
    const std::vector<int> pred = classify(set, held[f].points(), classifier, result.cells[cell].params);
    scores[t] = balanced_accuracy(pred, held[f].group_labels(), held[f].num_groups());
  });

  std::size_t best = 0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) sum += scores[f * cells + cell];
    result.cells[cell].mean_score = sum / static_cast<double>(folds);
    if (result.cells[cell].mean_score > result.cells[best].mean_score) best = cell;
  }
  result.chosen = result.cells[best].params;
  return result;
}

std::pair<double, std::optional<double>> mean_and_ci95(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("no values to average");
  double sum = 0.0;
  for (const double v : values) sum += v;
  const auto n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2) return {mean, std::nullopt};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  return {mean, boost::math::quantile(dist, 0.975) * sd / std::sqrt(n)};
}

std::vector<EvalReport> run_experiment(const std::vector<SplitPair>& splits, const ExperimentOptions& options) {
  if (splits.empty()) throw ValidationError("no splits to evaluate");
  if (options.methods.empty() || options.Ms.empty() || options.classifiers.empty()) {
    throw ValidationError("experiment needs at least one method, M and classifier");
  }
  options.grad.validate();

  std::vector<HyperGrid> grids(splits.size());
  parallel_for(splits.size(), [&](std::size_t s) {
    const bool complete = !options.grid.gamma.empty() && !options.grid.lambda.empty() && !options.grid.C.empty();
    HyperGrid grid = complete ? options.grid : default_grid(splits[s].train, derive_seed(splits[s].seed, 7));
    if (!options.grid.gamma.empty()) grid.gamma = options.grid.gamma;
    if (!options.grid.lambda.empty()) grid.lambda = options.grid.lambda;
    if (!options.grid.C.empty()) grid.C = options.grid.C;
    grids[s] = std::move(grid);
  });

  std::vector<EvalReport> reports;
  for (const Method method : options.methods) {
    for (const std::size_t M : options.Ms) {
      for (const Classifier c : options.classifiers) {
        EvalReport r;
        r.method = method;
        r.M = M;
        r.classifier = c;
        r.per_split.assign(splits.size(), 0.0);
        r.chosen.resize(splits.size());
        for (const auto& s : splits) r.split_seeds.push_back(s.seed);
        reports.push_back(std::move(r));
      }
    }
  }

  parallel_for(reports.size() * splits.size(), [&](std::size_t t) {
    EvalReport& r = reports[t / splits.size()];
    const std::size_t s = t % splits.size();
    const SplitPair& split = splits[s];
    MethodSpec spec;
    spec.method = r.method;
    spec.grad = options.grad;
    spec.seed = derive_seed(split.seed, 1);
    spec.record_value = false;
    const CvResult cv =
        grid_search_cv(split.train, spec, r.M, r.classifier, grids[s], options.folds, derive_seed(split.seed, 2));
    const Summary summary = summarise(split.train, spec, r.M, cv.chosen);
    const LabeledPrototypeSet set = LabeledPrototypeSet::from_summary(summary, split.train);
    const std::vector<int> pred = classify(set, split.test.points(), r.classifier, cv.chosen);
    r.per_split[s] = balanced_accuracy(pred, split.test.group_labels(), split.test.num_groups());
    r.chosen[s] = cv.chosen;
  });

  for (auto& r : reports) std::tie(r.mean, r.ci95_halfwidth) = mean_and_ci95(r.per_split);
  return reports;
}

void write_results_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "method,M,classifier,split,gamma,lambda,C,balanced_accuracy\n";
  for (const auto& r : reports) {
    const std::string head = std::string(to_string(r.method)) + "," + std::to_string(r.M) + "," +
                             std::string(to_string(r.classifier)) + ",";
    for (std::size_t s = 0; s < r.per_split.size(); ++s) {
      const auto& hp = r.chosen[s];
      out << head << s << "," << opt_str(hp.gamma) << "," << opt_str(hp.lambda) << "," << opt_str(hp.C) << ","
          << fmt("%.6f", r.per_split[s]) << "\n";
    }
    out << head << "mean,,,," << fmt("%.6f", r.mean) << "\n";
  }
}

void write_report_text(std::ostream& out, const std::vector<EvalReport>& reports) {
  for (const auto& r : reports) {
    out << "method=" << to_string(r.method) << "\n";
    out << "M=" << r.M << "\n";
    out << "classifier=" << to_string(r.classifier) << "\n";
    out << "splits=" << r.per_split.size() << "\n";
    out << "mean=" << fmt("%.6f", r.mean) << "\n";
    out << "ci95=" << (r.ci95_halfwidth ? fmt("%.6f", *r.ci95_halfwidth) : std::string("absent")) << "\n";
    for (std::size_t s = 0; s < r.per_split.size(); ++s) {
      const auto& hp = r.chosen[s];
      out << "split." << s << "=" << fmt("%.6f", r.per_split[s]) << " seed=" << r.split_seeds[s]
          << " gamma=" << opt_str(hp.gamma) << " lambda=" << opt_str(hp.lambda) << " C=" << opt_str(hp.C) << "\n";
    }
    out << "\n";
  }
}

void write_summary_table(std::ostream& out, const std::vector<EvalReport>& reports) {
  std::vector<Classifier> classifiers;
  std::vector<Method> methods;
  std::vector<std::size_t> Ms;
  auto add_unique = [](auto& list, const auto& v) {
    if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
  };
  std::map<std::tuple<int, int, std::size_t>, const EvalReport*> index;
  for (const auto& r : reports) {
    add_unique(classifiers, r.classifier);
    add_unique(methods, r.method);
    add_unique(Ms, r.M);
    index[{static_cast<int>(r.classifier), static_cast<int>(r.method), r.M}] = &r;
  }
  auto cell = [](const EvalReport& r) {
    std::string s = fmt("%.3f", r.mean);
    if (r.ci95_halfwidth) {
      std::string h = fmt("%.3f", *r.ci95_halfwidth);
      if (h.rfind("0.", 0) == 0) h.erase(0, 1);
      s += " ± " + h;
    }
    return s;
  };
  for (const Classifier c : classifiers) {
    out << "classifier: " << to_string(c) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s", "method");
    out << buf;
    for (const std::size_t M : Ms) {
      std::snprintf(buf, sizeof buf, " | %-14s", ("M=" + std::to_string(M)).c_str());
      out << buf;
    }
    out << "\n";
    for (const Method m : methods) {
      std::snprintf(buf, sizeof buf, "%-16s", std::string(to_string(m)).c_str());
      out << buf;
      for (const std::size_t M : Ms) {
        const auto it = index.find({static_cast<int>(c), static_cast<int>(m), M});
        const std::string text = it == index.end() ? "-" : cell(*it->second);
        out << " | " << text << std::string(text.size() < 14 ? 14 - text.size() : 0, ' ');
      }
      out << "\n";
    }
    out << "\n";
  }
}

}  // namespace compsumm
