#include <algorithm>
#include <cmath>

#include "compsumm/corpus.hpp"

namespace compsumm {

PcaModel fit_pca(const GroupedDataset& data, double target_variance) {
  if (!(target_variance > 0.0 && target_variance <= 1.0)) {
    throw ValidationError("PCA target variance must lie in (0, 1]");
  }
  if (data.size() < 2) throw ValidationError("PCA needs at least two rows");

  const Matrix& X = data.points();
  PcaModel model;
  model.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(data.size() - 1);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericError("covariance eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  const Eigen::Index d = cov.rows();
  std::vector<double> values(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) values[static_cast<std::size_t>(i)] = std::max(0.0, solver.eigenvalues()(d - 1 - i));
  double total = 0.0;
  for (const double v : values) total += v;
  if (!(total > 0.0)) throw DataError("PCA input has zero variance");

  const double nonzero_floor = values.front() * 1e-12;
  std::size_t nonzero = 0;
  while (nonzero < values.size() && values[nonzero] > nonzero_floor) ++nonzero;

  std::size_t k = 0;
  double cumulative = 0.0;
  while (k < nonzero && cumulative < target_variance - 1e-12) cumulative += values[k++] / total;
  model.target_reached = cumulative >= target_variance - 1e-12;

  model.components.resize(static_cast<Eigen::Index>(k), d);
  for (std::size_t c = 0; c < k; ++c) {
    Vector v = solver.eigenvectors().col(d - 1 - static_cast<Eigen::Index>(c));
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < d; ++j) {
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    }
    if (v(arg) < 0.0) v = -v;
    model.components.row(static_cast<Eigen::Index>(c)) = v.transpose();
    model.explained_variance_ratio.push_back(values[c] / total);
  }
  return model;
}

GroupedDataset apply_pca(const PcaModel& model, const GroupedDataset& data) {
  if (static_cast<std::size_t>(model.mean.size()) != data.dim()) {
    throw ValidationError("PCA model dimension " + std::to_string(model.mean.size()) +
                          " does not match data dimension " + std::to_string(data.dim()));
  }
  Matrix projected = (data.points().rowwise() - model.mean.transpose()) * model.components.transpose();
  return GroupedDataset(std::move(projected), data.group_labels(), data.group_names(), data.row_ids());
}

}  // namespace compsumm
