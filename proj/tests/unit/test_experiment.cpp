#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "compsumm/experiment.hpp"
#include "compsumm/methods.hpp"
#include "compsumm/parallel.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace compsumm;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentOptions small_options(std::vector<Method> methods) {
  ExperimentOptions o;
  o.methods = std::move(methods);
  o.Ms = {2};
  o.grad.max_iterations = 50;
  return o;
}

}  // namespace

TEST_CASE("method names round-trip and flags") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(all_methods().size() == 9);
  CHECK_THROWS_AS(parse_method("pca"), ValidationError);
  CHECK_FALSE(uses_gamma(Method::kmeans));
  CHECK(uses_gamma(Method::mmd_critic));
  CHECK(uses_lambda(Method::mmd_div_grad));
  CHECK_FALSE(uses_lambda(Method::nn_comp_greedy));
  CHECK(parse_classifier("1-nn") == Classifier::knn1);
  CHECK(parse_classifier(to_string(Classifier::svm)) == Classifier::svm);
}

TEST_CASE("every method summarises a small dataset") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 12, 3, 2.0, 51);
  Hyperparameters hp;
  hp.gamma = 0.3;
  hp.lambda = 1.0;
  MethodSpec spec;
  spec.seed = 4;
  spec.grad.max_iterations = 30;
  for (Method m : all_methods()) {
    spec.method = m;
    const Summary s = summarise(data, spec, 3, hp);
    CHECK_NOTHROW(s.validate(data));
    if (m == Method::full)
      CHECK(s.total() == data.size());
    else
      CHECK(s.total() == 6);
    if (m != Method::mmd_critic && m != Method::full)
      for (const auto& p : s.prototypes) CHECK(p.size() == 3);
  }
  spec.method = Method::mmd_diff_greedy;
  CHECK_THROWS_AS(summarise(data, spec, 2, Hyperparameters{}), ValidationError);
}

TEST_CASE("stratified folds are balanced per group") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 10, 2, 1.0, 52);
  const auto folds = stratified_folds(data, 3, 1);
  CHECK(folds == stratified_folds(data, 3, 1));
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<int> counts(3, 0);
    for (int r : data.members(g)) ++counts[static_cast<std::size_t>(folds[static_cast<std::size_t>(r)])];
    CHECK(counts == std::vector<int>{4, 3, 3});
  }
  CHECK_THROWS_AS(stratified_folds(synthetic::gaussian_groups(2, 2, 2, 1.0, 1), 3, 0), ValidationError);
}

TEST_CASE("classify is constant for a single-class training set") {
  LabeledPrototypeSet p;
  p.points.resize(2, 1);
  p.points << 0.0, 1.0;
  p.labels = {1, 1};
  Matrix q(3, 1);
  q << -5.0, 0.5, 9.0;
  Hyperparameters hp;
  hp.gamma = 1.0;
  hp.C = 1.0;
  CHECK(classify(p, q, Classifier::svm, hp) == std::vector<int>{1, 1, 1});
}

TEST_CASE("grid search with one cell returns it") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 9, 2, 2.0, 53);
  MethodSpec spec;
  spec.method = Method::mmd_diff_greedy;
  HyperGrid grid{{0.7}, {2.0}, {10.0}};
  const CvResult r = grid_search_cv(data, spec, 2, Classifier::knn1, grid, 3, 0);
  CHECK(r.chosen.gamma == 0.7);
  CHECK(r.chosen.lambda == 2.0);
  CHECK_FALSE(r.chosen.C.has_value());
}

TEST_CASE("grid search picks the separating cell") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 15, 2, 6.0, 54);
  MethodSpec spec;
  spec.method = Method::full;
  HyperGrid grid{{0.5, 1e4}, {}, {10.0}};
  const CvResult r = grid_search_cv(data, spec, 2, Classifier::svm, grid, 3, 7);
  REQUIRE(r.cells.size() == 2);
  CHECK(r.chosen.gamma == 0.5);
  CHECK(r.cells[0].mean_score == 1.0);
  CHECK(r.cells[1].mean_score < 1.0);

  HyperGrid flip{{1e4, 0.5}, {}, {10.0}};
  CHECK(grid_search_cv(data, spec, 2, Classifier::svm, flip, 3, 7).chosen.gamma == 0.5);
}

TEST_CASE("grid search is deterministic and breaks ties toward small values") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 12, 2, 8.0, 55);
  MethodSpec spec;
  spec.method = Method::kmeans;
  HyperGrid grid{{0.1, 1.0}, {0.5, 1.0}, {1.0}};
  const CvResult a = grid_search_cv(data, spec, 2, Classifier::knn1, grid, 3, 3);
  const CvResult b = grid_search_cv(data, spec, 2, Classifier::knn1, grid, 3, 3);
  CHECK(a.chosen == b.chosen);
  // kmeans with 1-NN searches nothing
  CHECK_FALSE(a.chosen.gamma.has_value());
  CHECK_FALSE(a.chosen.lambda.has_value());

  spec.method = Method::mmd_diff_greedy;
  const CvResult c = grid_search_cv(data, spec, 2, Classifier::knn1, grid, 3, 3);
  double best = -1.0;
  for (const auto& cell : c.cells) best = std::max(best, cell.mean_score);
  for (const auto& cell : c.cells) {
    if (cell.mean_score == best) {
      CHECK(cell.params == c.chosen);
      break;
    }
  }
}

TEST_CASE("mean and Student-t interval") {
  const auto [m1, ci1] = mean_and_ci95({0.5});
  CHECK(m1 == 0.5);
  CHECK_FALSE(ci1.has_value());
  const auto [m, ci] = mean_and_ci95({1.0, 2.0, 3.0, 4.0});
  CHECK(m == 2.5);
  REQUIRE(ci.has_value());
  // t_{0.975,3} = 3.182446..., s = sqrt(5/3)
  CHECK(*ci == doctest::Approx(3.1824463052842638 * std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("run_experiment shapes, determinism and the full reference") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 20, 2, 1.5, 56);
  const auto splits = make_splits(data, 0.8, 3, 10);
  ExperimentOptions o = small_options({Method::kmeans, Method::full, Method::kmeans});
  set_worker_count(2);
  const auto reports = run_experiment(splits, o);
  set_worker_count(1);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].per_split == reports[2].per_split);
  CHECK(reports[0].per_split.size() == 3);
  const double mean = std::accumulate(reports[0].per_split.begin(), reports[0].per_split.end(), 0.0) / 3.0;
  CHECK(std::abs(reports[0].mean - mean) < 1e-12);
  CHECK(reports[0].ci95_halfwidth.has_value());

  const auto again = run_experiment(splits, o);
  for (std::size_t r = 0; r < 3; ++r) CHECK(again[r].per_split == reports[r].per_split);

  std::ostringstream csv, text, table;
  write_results_csv(csv, reports);
  write_report_text(text, reports);
  write_summary_table(table, reports);
  CHECK(count_lines(csv.str()) == 1 + 3 * (3 + 1));
  CHECK(csv.str().rfind("method,M,classifier,split,gamma,lambda,C,balanced_accuracy\n", 0) == 0);
  CHECK(table.str().find("kmeans") != std::string::npos);
  CHECK(text.str().find("method=full") != std::string::npos);
}

TEST_CASE("a single split has no interval") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 15, 2, 1.5, 57);
  const auto reports = run_experiment(make_splits(data, 0.8, 1, 0), small_options({Method::kmedoids}));
  REQUIRE(reports.size() == 1);
  CHECK_FALSE(reports[0].ci95_halfwidth.has_value());
}

TEST_CASE("svm experiment records the chosen C and gamma") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 15, 2, 3.0, 58);
  ExperimentOptions o = small_options({Method::mmd_diff_greedy});
  o.classifiers = {Classifier::svm};
  o.grid = HyperGrid{{0.5}, {1.0}, {1.0, 10.0}};
  const auto reports = run_experiment(make_splits(data, 0.8, 2, 0), o);
  for (const auto& hp : reports[0].chosen) {
    CHECK(hp.gamma == 0.5);
    CHECK(hp.lambda == 1.0);
    CHECK(hp.C.has_value());
  }
}
