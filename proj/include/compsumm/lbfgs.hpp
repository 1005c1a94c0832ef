#ifndef COMPSUMM_LBFGS_HPP
#define COMPSUMM_LBFGS_HPP

#include <functional>
#include <vector>

#include "compsumm/common.hpp"

namespace compsumm {

struct LbfgsOptions {
  int max_iterations = 500;
  int history_size = 10;
  /// Stop when the infinity norm of the gradient falls to this value.
  double gradient_tolerance = 1e-6;
  /// Armijo (sufficient decrease) and curvature constants of the strong
  /// Wolfe conditions.
  double armijo = 1e-4;
  double curvature = 0.9;
  int max_line_search_evaluations = 40;
};

enum class LbfgsStatus { converged, max_iterations, line_search_failed };

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;  ///< accepted steps
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
  /// Objective after each accepted step, starting with the initial value.
  /// Strictly decreasing.
  std::vector<double> trajectory;
};

/// Returns f(x) and writes the gradient into `grad` (already sized).
using ObjectiveFunction = std::function<double(const Vector& x, Vector& grad)>;

/// Limited-memory BFGS minimisation with the two-loop recursion and a
/// bracketing line search for the strong Wolfe conditions. A step is only
/// accepted when it decreases the objective, so the returned value never
/// exceeds the initial one. Pairs with nonpositive curvature are skipped.
LbfgsResult lbfgs_minimize(const ObjectiveFunction& f, Vector x0, const LbfgsOptions& options = {});

}  // namespace compsumm

#endif  // COMPSUMM_LBFGS_HPP
