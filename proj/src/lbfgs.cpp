#include "compsumm/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace compsumm {

namespace {

struct Trial {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;
  Vector grad;
};

// Minimiser of the cubic matching values and slopes at a and b, or the
// midpoint when that is undefined or too close to an end of the interval.
double interpolate(const Trial& a, const Trial& b) {
  const double lo = std::min(a.step, b.step);
  const double hi = std::max(a.step, b.step);
  const double width = hi - lo;
  const double mid = 0.5 * (lo + hi);
  if (!std::isfinite(a.value) || !std::isfinite(b.value)) return mid;
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
  const double disc = d1 * d1 - a.slope * b.slope;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
  const double t = b.step - (b.step - a.step) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
  if (!std::isfinite(t) || t < lo + 0.1 * width || t > hi - 0.1 * width) return mid;
  return t;
}

class LineSearch {
 public:
  LineSearch(const ObjectiveFunction& f, const Vector& x, const Vector& direction, double value, double slope,
             const LbfgsOptions& options)
      : f_(f), x_(x), p_(direction), f0_(value), d0_(slope), options_(options) {}

  /// Returns the accepted trial, or a trial with step 0 when no decrease was
  /// found.
  Trial run(double initial_step) {
    Trial prev{0.0, f0_, d0_, {}};
    double step = initial_step;
    for (int i = 0; evaluations_ < options_.max_line_search_evaluations; ++i) {
      Trial cur = evaluate(step);
      if (!sufficient(cur) || (i > 0 && cur.value >= prev.value)) return zoom(prev, cur);
      remember(cur);
      if (std::abs(cur.slope) <= -options_.curvature * d0_) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = cur;
      step *= 2.0;
    }
    return best_;
  }

  int evaluations() const { return evaluations_; }

 private:
  Trial evaluate(double step) {
    Trial t;
    t.step = step;
    t.grad.resize(x_.size());
    t.value = f_(x_ + step * p_, t.grad);
    t.slope = t.grad.dot(p_);
    ++evaluations_;
    return t;
  }

  bool sufficient(const Trial& t) const {
    return std::isfinite(t.value) && std::isfinite(t.slope) && t.value <= f0_ + options_.armijo * t.step * d0_;
  }

  void remember(const Trial& t) {
    if (t.value < f0_ && (best_.step == 0.0 || t.value < best_.value)) best_ = t;
  }

  Trial zoom(Trial lo, Trial hi) {
    while (evaluations_ < options_.max_line_search_evaluations) {
      Trial cur = evaluate(interpolate(lo, hi));
      if (!sufficient(cur) || cur.value >= lo.value) {
        hi = cur;
        continue;
      }
      remember(cur);
      if (std::abs(cur.slope) <= -options_.curvature * d0_) return cur;
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
      lo = cur;
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, lo.step)) break;
    }
    return best_;
  }

  const ObjectiveFunction& f_;
  const Vector& x_;
  const Vector& p_;
  double f0_;
  double d0_;
  const LbfgsOptions& options_;
  int evaluations_ = 0;
  Trial best_{0.0, 0.0, 0.0, {}};
};

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFunction& f, Vector x0, const LbfgsOptions& options) {
  if (options.max_iterations < 1) throw ValidationError("L-BFGS needs max_iterations >= 1");
  if (options.history_size < 1) throw ValidationError("L-BFGS needs history_size >= 1");

  LbfgsResult result;
  result.x = std::move(x0);
  Vector grad(result.x.size());
  double value = f(result.x, grad);
  result.evaluations = 1;
  if (!std::isfinite(value) || !grad.allFinite()) throw NumericError("L-BFGS: non-finite objective at the start");
  result.initial_value = value;
  result.trajectory.push_back(value);

  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;
  std::deque<double> rho_hist;

  while (true) {
    if (grad.size() == 0 || grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.status = LbfgsStatus::converged;
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.status = LbfgsStatus::max_iterations;
      break;
    }

    // Two-loop recursion.
    Vector q = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vector direction = -q;
    double slope = grad.dot(direction);
    double initial_step = 1.0;
    if (!(slope < 0.0) || s_hist.empty()) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      slope = -grad.squaredNorm();
      initial_step = 1.0 / std::sqrt(grad.squaredNorm());
    }

    LineSearch search(f, result.x, direction, value, slope, options);
    Trial accepted = search.run(initial_step);
    result.evaluations += search.evaluations();
    if (accepted.step == 0.0 || !(accepted.value < value)) {
      result.status = LbfgsStatus::line_search_failed;
      break;
    }

    Vector s = accepted.step * direction;
    Vector y = accepted.grad - grad;
    result.x += s;
    value = accepted.value;
    grad = std::move(accepted.grad);
    ++result.iterations;
    result.trajectory.push_back(value);

    const double sy = s.dot(y);
    if (sy > 1e-12 * std::sqrt(s.squaredNorm() * y.squaredNorm())) {
      if (static_cast<int>(s_hist.size()) == options.history_size) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
  }
  result.value = value;
  return result;
}

}  // namespace compsumm
