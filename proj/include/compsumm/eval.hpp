#ifndef COMPSUMM_EVAL_HPP
#define COMPSUMM_EVAL_HPP

#include <span>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/kernel.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm {

/// Training points for a classifier with their group labels.
struct LabeledPrototypeSet {
  Matrix points;
  std::vector<int> labels;

  static LabeledPrototypeSet from_summary(const Summary& summary, const GroupedDataset& data);
  static LabeledPrototypeSet from_dataset(const GroupedDataset& data);

  std::size_t size() const { return labels.size(); }
  /// Distinct labels in ascending order.
  std::vector<int> classes() const;
};

/// Label of the Euclidean-nearest prototype; ties go to the earliest one.
int knn1_predict(const LabeledPrototypeSet& protos, std::span<const double> query);
std::vector<int> knn1_predict(const LabeledPrototypeSet& protos, const Matrix& queries);

struct SvmOptions {
  double C = 1.0;
  KernelSpec kernel{1.0};
  /// Stop when the maximal KKT violation m(alpha) - M(alpha) drops to this.
  double tolerance = 1e-3;
  /// 0 means 10^4 times the number of training points.
  long max_iterations = 0;
};

/// One soft-margin machine, f(x) = sum_i coef_i k(x_i, x) - rho with
/// coef_i = alpha_i y_i, y_i in {-1, +1}.
struct BinarySvm {
  Matrix support;             ///< rows with alpha_i > 0
  Vector coef;                ///< alpha_i y_i for the support rows
  std::vector<double> alpha;  ///< over all training rows, in input order
  double rho = 0.0;
  double C = 1.0;
  KernelSpec kernel{1.0};
  double dual_objective = 0.0;  ///< sum alpha - 1/2 alpha' Q alpha
  double kkt_gap = 0.0;
  long iterations = 0;
  bool converged = false;

  double decision(std::span<const double> x) const;
};

/// Dual of the soft-margin problem: sum alpha - 1/2 sum_ij alpha_i alpha_j
/// y_i y_j k(x_i, x_j).
double svm_dual_objective(std::span<const double> alpha, const Matrix& X, std::span<const int> y,
                          const KernelSpec& kernel);

/// SMO with second-order working-set selection. `y` holds -1/+1.
BinarySvm svm_train_binary(const Matrix& X, std::span<const int> y, const SvmOptions& options);

/// One machine for two classes (class[1] is the positive side), one-vs-rest
/// otherwise. Prediction takes the largest decision value, ties to the
/// smaller class.
class SvmModel {
 public:
  SvmModel(std::vector<int> classes, std::vector<BinarySvm> machines);

  const std::vector<int>& classes() const { return classes_; }
  const std::vector<BinarySvm>& machines() const { return machines_; }
  /// One value per class.
  std::vector<double> decision_values(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  std::vector<int> predict(const Matrix& queries) const;

 private:
  std::vector<int> classes_;
  std::vector<BinarySvm> machines_;
};

/// Throws ValidationError for fewer than two classes.
SvmModel svm_train(const LabeledPrototypeSet& protos, const SvmOptions& options);

/// Mean per-class recall over the classes present in `truth`.
double balanced_accuracy(std::span<const int> predictions, std::span<const int> truth);
/// Classes are 0..n_classes-1; each must occur in `truth`.
double balanced_accuracy(std::span<const int> predictions, std::span<const int> truth, std::size_t n_classes);

}  // namespace compsumm

#endif  // COMPSUMM_EVAL_HPP
