#include "compsumm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"

namespace compsumm {

KernelSpec::KernelSpec(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("kernel gamma must be positive and finite");
}

double rbf(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
  if (x.size() != y.size()) throw ValidationError("rbf: dimension mismatch");
  return std::exp(-spec.gamma() * squared_distance(x, y));
}

KernelMatrix kernel_matrix(const Matrix& X, const Matrix& Y, const KernelSpec& spec) {
  if (X.cols() != Y.cols()) throw ValidationError("kernel_matrix: dimension mismatch");
  Matrix values(X.rows(), Y.rows());
  parallel_for(static_cast<std::size_t>(X.rows()), [&](std::size_t i) {
    const auto xi = row_span(X, static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < Y.rows(); ++j) {
      values(static_cast<Eigen::Index>(i), j) = std::exp(-spec.gamma() * squared_distance(xi, row_span(Y, j)));
    }
  });
  return KernelMatrix(std::move(values), spec);
}

KernelMatrix kernel_matrix(const Matrix& X, const KernelSpec& spec) {
  const Eigen::Index n = X.rows();
  Matrix values(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto xi = row_span(X, r);
    values(r, r) = 1.0;
    for (Eigen::Index j = r + 1; j < n; ++j) values(r, j) = std::exp(-spec.gamma() * squared_distance(xi, row_span(X, j)));
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) values(i, j) = values(j, i);
  }
  return KernelMatrix(std::move(values), spec);
}

double median_gamma(const Matrix& X, std::size_t max_pairs, std::uint64_t seed) {
  const auto n = static_cast<std::uint64_t>(X.rows());
  if (n < 2) throw ValidationError("median_gamma needs at least two points");
  if (max_pairs == 0) throw ValidationError("median_gamma needs max_pairs >= 1");
  const std::uint64_t all_pairs = n * (n - 1) / 2;

  std::vector<double> dists;
  auto add_pair = [&](std::uint64_t i, std::uint64_t j) {
    dists.push_back(squared_distance(row_span(X, static_cast<Eigen::Index>(i)), row_span(X, static_cast<Eigen::Index>(j))));
  };
  if (all_pairs <= max_pairs) {
    dists.reserve(all_pairs);
    for (std::uint64_t i = 0; i < n; ++i) {
      for (std::uint64_t j = i + 1; j < n; ++j) add_pair(i, j);
    }
  } else {
    Rng rng(seed);
    std::unordered_set<std::uint64_t> seen;
    dists.reserve(max_pairs);
    while (dists.size() < max_pairs) {
      std::uint64_t i = rng.uniform_below(n);
      std::uint64_t j = rng.uniform_below(n - 1);
      if (j >= i) ++j;
      if (i > j) std::swap(i, j);
      if (seen.insert(i * n + j).second) add_pair(i, j);
    }
  }

  std::vector<double> sorted = dists;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  if (median > 0.0) return 1.0 / median;

  double sum = 0.0;
  std::size_t count = 0;
  for (const double d : dists) {
    if (d > 0.0) {
      sum += d;
      ++count;
    }
  }
  if (count == 0) throw DataError("median_gamma: all points are identical");
  return static_cast<double>(count) / sum;
}

}  // namespace compsumm
