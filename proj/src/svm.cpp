#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "compsumm/eval.hpp"
#include "compsumm/parallel.hpp"

namespace compsumm {

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kCacheBytes = std::size_t{128} << 20;

// Kernel rows computed on demand; the oldest rows are dropped once the
// byte budget is spent.
class RowCache {
 public:
  RowCache(const Matrix& X, const KernelSpec& spec)
      : X_(X), spec_(spec), rows_(static_cast<std::size_t>(X.rows())),
        capacity_(std::max<std::size_t>(2, kCacheBytes / (sizeof(double) * std::max<Eigen::Index>(1, X.rows())))) {}

  const std::vector<double>& row(std::size_t i) {
    auto& r = rows_[i];
    if (r.empty()) {
      if (order_.size() >= capacity_) {
        std::vector<double>().swap(rows_[order_.front()]);
        order_.pop_front();
      }
      const auto n = static_cast<std::size_t>(X_.rows());
      r.resize(n);
      const auto xi = row_span(X_, static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < n; ++j) r[j] = rbf(xi, row_span(X_, static_cast<Eigen::Index>(j)), spec_);
      order_.push_back(i);
    }
    return r;
  }

 private:
  const Matrix& X_;
  KernelSpec spec_;
  std::vector<std::vector<double>> rows_;
  std::deque<std::size_t> order_;
  std::size_t capacity_;
};

}  // namespace

double BinarySvm::decision(std::span<const double> x) const {
  double f = -rho;
  for (Eigen::Index i = 0; i < support.rows(); ++i) f += coef[i] * rbf(row_span(support, i), x, kernel);
  return f;
}

double svm_dual_objective(std::span<const double> alpha, const Matrix& X, std::span<const int> y,
                          const KernelSpec& kernel) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (alpha.size() != n || y.size() != n) throw ValidationError("svm_dual_objective: size mismatch");
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * y[i] * y[j] *
              rbf(row_span(X, static_cast<Eigen::Index>(i)), row_span(X, static_cast<Eigen::Index>(j)), kernel);
    }
  }
  return linear - 0.5 * quad;
}

BinarySvm svm_train_binary(const Matrix& X, std::span<const int> y, const SvmOptions& options) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (n == 0 || y.size() != n) throw ValidationError("svm: need one label per training row");
  if (!(options.C > 0.0) || !std::isfinite(options.C)) throw ValidationError("svm: C must be positive and finite");
  if (!(options.tolerance > 0.0)) throw ValidationError("svm: tolerance must be positive");
  bool has_pos = false, has_neg = false;
  for (const int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw ValidationError("svm: binary labels must be -1 or +1");
  }
  if (!has_pos || !has_neg) throw ValidationError("svm: both classes must be present");

  const double C = options.C;
  const long cap = options.max_iterations > 0 ? options.max_iterations : 10000L * static_cast<long>(n);
  RowCache cache(X, options.kernel);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = row_span(X, static_cast<Eigen::Index>(i));
    diag[i] = rbf(xi, xi, options.kernel);
  }

  auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

  BinarySvm out;
  out.C = C;
  out.kernel = options.kernel;
  long iter = 0;
  while (true) {
    // i maximises -y G over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * G[t] > gmax) {
        gmax = -y[t] * G[t];
        i = t;
      }
    }
    // j: second-order choice over I_low; gmin tracks min -y G over I_low.
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    double best_obj = std::numeric_limits<double>::infinity();
    const std::vector<double>* Ki = i < n ? &cache.row(i) : nullptr;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * G[t];
      gmin = std::min(gmin, v);
      const double b = gmax - v;
      if (Ki && b > 0.0) {
        double a = diag[i] + diag[t] - 2.0 * (*Ki)[t];
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    out.kkt_gap = gmax - gmin;
    if (i == n || j == n || gmax - gmin < options.tolerance) {
      out.converged = true;
      break;
    }
    if (iter >= cap) break;
    ++iter;

    const std::vector<double> Ki_row = *Ki;  // the next lookup may evict it
    const std::vector<double>& Kj = cache.row(j);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double quad = diag[i] + diag[j] - 2.0 * Ki_row[j];
    if (quad <= 0.0) quad = kTau;

    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += y[t] * (y[i] * Ki_row[t] * di + y[j] * Kj[t] * dj);
    }
  }
  out.iterations = iter;

  // Bias from free vectors, or the middle of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double quad_sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    quad_sum += alpha[t] * (G[t] - 1.0);
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  out.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);
  // 1/2 a'Qa - e'a = 1/2 sum a (G - 1) at the final gradient.
  out.dual_objective = -0.5 * quad_sum;

  std::vector<Eigen::Index> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) sv.push_back(static_cast<Eigen::Index>(t));
  }
  out.support.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
  out.coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    out.support.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
    out.coef[static_cast<Eigen::Index>(k)] = alpha[static_cast<std::size_t>(sv[k])] * y[static_cast<std::size_t>(sv[k])];
  }
  out.alpha = std::move(alpha);
  return out;
}

SvmModel::SvmModel(std::vector<int> classes, std::vector<BinarySvm> machines)
    : classes_(std::move(classes)), machines_(std::move(machines)) {
  const std::size_t expected = classes_.size() == 2 ? 1 : classes_.size();
  if (classes_.size() < 2 || machines_.size() != expected) throw ValidationError("svm: inconsistent model");
}

std::vector<double> SvmModel::decision_values(std::span<const double> x) const {
  if (classes_.size() == 2) {
    const double f = machines_[0].decision(x);
    return {-f, f};
  }
  std::vector<double> out;
  out.reserve(machines_.size());
  for (const auto& m : machines_) out.push_back(m.decision(x));
  return out;
}

int SvmModel::predict(std::span<const double> x) const {
  const std::vector<double> values = decision_values(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < values.size(); ++c) {
    if (values[c] > values[best]) best = c;
  }
  return classes_[best];
}

std::vector<int> SvmModel::predict(const Matrix& queries) const {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(row_span(queries, i));
  return out;
}

SvmModel svm_train(const LabeledPrototypeSet& protos, const SvmOptions& options) {
  std::vector<int> classes = protos.classes();
  if (classes.size() < 2) throw ValidationError("svm: training data has fewer than two classes");
  const std::size_t machines = classes.size() == 2 ? 1 : classes.size();
  std::vector<BinarySvm> trained(machines);
  parallel_for(machines, [&](std::size_t m) {
    const int positive = classes.size() == 2 ? classes[1] : classes[m];
    std::vector<int> y(protos.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = protos.labels[i] == positive ? 1 : -1;
    trained[m] = svm_train_binary(protos.points, y, options);
  });
  return SvmModel(std::move(classes), std::move(trained));
}

}  // namespace compsumm
