#ifndef COMPSUMM_COMMON_HPP
#define COMPSUMM_COMMON_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace compsumm {

/// Dense row-major matrix; one observation per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration (sizes, ranges, unknown names).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or degenerate input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-finite values, solver breakdown).
class NumericError : public Error {
 public:
  using Error::Error;
};

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

}  // namespace compsumm

#endif  // COMPSUMM_COMMON_HPP
