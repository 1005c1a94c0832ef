#ifndef COMPSUMM_KERNEL_HPP
#define COMPSUMM_KERNEL_HPP

#include <cstdint>
#include <span>

#include "compsumm/common.hpp"

namespace compsumm {

/// RBF kernel k(x, y) = exp(-gamma * ||x - y||^2).
class KernelSpec {
 public:
  explicit KernelSpec(double gamma);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

double rbf(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// Cached pairwise kernel values between the rows of two matrices.
class KernelMatrix {
 public:
  KernelMatrix(Matrix values, KernelSpec spec) : values_(std::move(values)), spec_(spec) {}

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::span<const double> row(std::size_t i) const { return row_span(values_, static_cast<Eigen::Index>(i)); }
  const Matrix& values() const { return values_; }
  const KernelSpec& spec() const { return spec_; }

 private:
  Matrix values_;
  KernelSpec spec_;
};

/// values(i, j) = rbf(X_i, Y_j), evaluated entry by entry with the scalar
/// kernel so every entry is bit-identical to rbf(). Rows are filled in
/// parallel.
KernelMatrix kernel_matrix(const Matrix& X, const Matrix& Y, const KernelSpec& spec);
KernelMatrix kernel_matrix(const Matrix& X, const KernelSpec& spec);

/// Median heuristic: 1 / median squared distance over min(max_pairs,
/// N(N-1)/2) distinct pairs. Uses every pair when the budget allows,
/// otherwise samples distinct pairs with Rng(seed). Falls back to 1 / mean
/// nonzero squared distance when the median is zero. Throws DataError when
/// all sampled points coincide.
double median_gamma(const Matrix& X, std::size_t max_pairs, std::uint64_t seed);

}  // namespace compsumm

#endif  // COMPSUMM_KERNEL_HPP
