#include "compsumm/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace compsumm {

LabeledPrototypeSet LabeledPrototypeSet::from_summary(const Summary& summary, const GroupedDataset& data) {
  summary.validate(data);
  std::vector<int> rows;
  LabeledPrototypeSet out;
  for (std::size_t g = 0; g < summary.prototypes.size(); ++g) {
    for (const int r : summary.prototypes[g]) {
      rows.push_back(r);
      out.labels.push_back(static_cast<int>(g));
    }
  }
  if (rows.empty()) throw ValidationError("summary has no prototypes");
  out.points = data.gather(rows);
  return out;
}

LabeledPrototypeSet LabeledPrototypeSet::from_dataset(const GroupedDataset& data) {
  return {data.points(), data.group_labels()};
}

std::vector<int> LabeledPrototypeSet::classes() const {
  std::vector<int> out(labels);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int knn1_predict(const LabeledPrototypeSet& protos, std::span<const double> query) {
  if (protos.size() == 0) throw ValidationError("1-NN needs at least one prototype");
  if (query.size() != static_cast<std::size_t>(protos.points.cols())) throw ValidationError("1-NN query dimension mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < protos.size(); ++i) {
    const double d = squared_distance(row_span(protos.points, static_cast<Eigen::Index>(i)), query);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return protos.labels[best];
}

std::vector<int> knn1_predict(const LabeledPrototypeSet& protos, const Matrix& queries) {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) out[static_cast<std::size_t>(i)] = knn1_predict(protos, row_span(queries, i));
  return out;
}

double balanced_accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size() || truth.empty()) {
    throw ValidationError("balanced accuracy needs equally long, nonempty label lists");
  }
  std::map<int, std::pair<std::size_t, std::size_t>> per_class;  // class -> (hits, count)
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& [hits, count] = per_class[truth[i]];
    ++count;
    if (predictions[i] == truth[i]) ++hits;
  }
  double sum = 0.0;
  for (const auto& [label, hc] : per_class) sum += static_cast<double>(hc.first) / static_cast<double>(hc.second);
  return sum / static_cast<double>(per_class.size());
}

double balanced_accuracy(std::span<const int> predictions, std::span<const int> truth, std::size_t n_classes) {
  if (predictions.size() != truth.size() || truth.empty()) {
    throw ValidationError("balanced accuracy needs equally long, nonempty label lists");
  }
  std::vector<std::size_t> hits(n_classes, 0), counts(n_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= n_classes) {
      throw ValidationError("true label " + std::to_string(truth[i]) + " outside 0.." + std::to_string(n_classes - 1));
    }
    const auto c = static_cast<std::size_t>(truth[i]);
    ++counts[c];
    if (predictions[i] == truth[i]) ++hits[c];
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0) throw ValidationError("class " + std::to_string(c) + " has no true instances");
    sum += static_cast<double>(hits[c]) / static_cast<double>(counts[c]);
  }
  return sum / static_cast<double>(n_classes);
}

}  // namespace compsumm
