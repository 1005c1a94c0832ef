#ifndef COMPSUMM_EXPERIMENT_HPP
#define COMPSUMM_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/eval.hpp"
#include "compsumm/methods.hpp"

namespace compsumm {

enum class Classifier { knn1, svm };

std::string_view to_string(Classifier c);
Classifier parse_classifier(std::string_view name);

struct HyperGrid {
  std::vector<double> gamma;
  std::vector<double> lambda;
  std::vector<double> C;
};

/// gamma_med * {1/4, 1/2, 1, 2, 4} with gamma_med the median heuristic on
/// `train`; lambda in {0.5, 1, 2}; C in {0.1, 1, 10, 100}.
HyperGrid default_grid(const GroupedDataset& train, std::uint64_t seed);
inline constexpr std::size_t kMedianPairs = 20000;

/// Which axes a (method, classifier) pair searches. The SVM always needs a
/// kernel width, which it shares with the summariser.
bool searches_gamma(Method method, Classifier classifier);
bool searches_lambda(Method method, Classifier classifier);
bool searches_C(Method method, Classifier classifier);

struct CvCell {
  Hyperparameters params;
  double mean_score = 0.0;
};

struct CvResult {
  Hyperparameters chosen;
  std::vector<CvCell> cells;  ///< in (gamma, lambda, C) grid order
};

/// Stratified k-fold assignment: within each group the members are shuffled
/// with derive_seed(seed, g) and dealt round-robin into folds.
std::vector<int> stratified_folds(const GroupedDataset& data, std::size_t folds, std::uint64_t seed);

/// Labels predicted for `queries` by the classifier trained on `train_set`.
/// When the training set holds a single class the prediction is constant.
std::vector<int> classify(const LabeledPrototypeSet& train_set, const Matrix& queries, Classifier classifier,
                          const Hyperparameters& hp);

/// Grid search with stratified k-fold cross-validation on `train` only.
/// Chooses the best mean balanced accuracy; ties go to the smaller gamma,
/// then lambda, then C. Axes the pair does not search are left empty.
CvResult grid_search_cv(const GroupedDataset& train, const MethodSpec& method, std::size_t M, Classifier classifier,
                        const HyperGrid& grid, std::size_t folds, std::uint64_t seed);

struct ExperimentOptions {
  std::vector<Method> methods;
  std::vector<std::size_t> Ms;
  std::vector<Classifier> classifiers{Classifier::knn1};
  std::size_t folds = 3;
  GradConfig grad;
  /// Grid overrides; empty axes fall back to default_grid on each train split.
  HyperGrid grid;
};

struct EvalReport {
  Method method = Method::kmeans;
  std::size_t M = 0;
  Classifier classifier = Classifier::knn1;
  std::vector<double> per_split;
  std::vector<Hyperparameters> chosen;
  std::vector<std::uint64_t> split_seeds;
  double mean = 0.0;
  /// t_{0.975, n-1} s / sqrt(n); absent for a single split.
  std::optional<double> ci95_halfwidth;
};

/// Arithmetic mean and Student-t 95% half-width.
std::pair<double, std::optional<double>> mean_and_ci95(const std::vector<double>& values);

/// One report per (method, M, classifier), in that nesting order. Each split
/// tunes on its train part, summarises the full train part with the chosen
/// hyperparameters, and scores the classifier on the test part.
std::vector<EvalReport> run_experiment(const std::vector<SplitPair>& splits, const ExperimentOptions& options);

/// method,M,classifier,split,gamma,lambda,C,balanced_accuracy with one row
/// per split and a final "mean" row per report.
void write_results_csv(std::ostream& out, const std::vector<EvalReport>& reports);
/// Line-oriented key=value records, one block per report.
void write_report_text(std::ostream& out, const std::vector<EvalReport>& reports);
/// Methods down, M across, "mean +- half-width" cells; one table per classifier.
void write_summary_table(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace compsumm

#endif  // COMPSUMM_EXPERIMENT_HPP
