#include "oracles.hpp"

#include "compsumm/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace compsumm::oracle {

namespace {

long double k_rbf(const Matrix& A, Eigen::Index i, const Matrix& B, Eigen::Index j, double gamma) {
  long double d2 = 0.0L;
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    const long double diff = static_cast<long double>(A(i, c)) - static_cast<long double>(B(j, c));
    d2 += diff * diff;
  }
  return std::exp(-static_cast<long double>(gamma) * d2);
}

std::vector<double> project(const std::vector<double>& v, std::span<const int> y, double C) {
  const std::size_t n = v.size();
  auto at = [&](double nu, std::vector<double>& out) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = std::clamp(v[i] - nu * y[i], 0.0, C);
      s += y[i] * out[i];
    }
    return s;
  };
  double bound = C + 1.0;
  for (const double x : v) bound = std::max(bound, std::abs(x) + C + 1.0);
  double lo = -bound, hi = bound;
  std::vector<double> out(n);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    // sum y_i alpha_i(nu) is nonincreasing in nu.
    if (at(mid, out) > 0.0) lo = mid;
    else hi = mid;
  }
  at(0.5 * (lo + hi), out);
  return out;
}

}  // namespace

double mmd2(const Matrix& X, const Matrix& Y, double gamma) {
  long double xx = 0.0L, yy = 0.0L, xy = 0.0L;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.rows(); ++j) xx += k_rbf(X, i, X, j, gamma);
  }
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.rows(); ++j) yy += k_rbf(Y, i, Y, j, gamma);
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < Y.rows(); ++j) xy += k_rbf(X, i, Y, j, gamma);
  }
  const auto n = static_cast<long double>(X.rows());
  const auto m = static_cast<long double>(Y.rows());
  return static_cast<double>(xx / (n * n) + yy / (m * m) - 2.0L * xy / (n * m));
}

MetaPrototypes finite_difference_gradient(const MetaPrototypes& meta, const GroupedDataset& data,
                                          const ObjectiveSpec& spec, double step) {
  MetaPrototypes grad;
  MetaPrototypes work = meta;
  for (std::size_t g = 0; g < meta.num_groups(); ++g) {
    Matrix out(meta.points[g].rows(), meta.points[g].cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const double x = meta.points[g](i, c);
        work.points[g](i, c) = x + step;
        const double up = utility(work, data, spec);
        work.points[g](i, c) = x - step;
        const double down = utility(work, data, spec);
        work.points[g](i, c) = x;
        out(i, c) = (up - down) / (2.0 * step);
      }
    }
    grad.points.push_back(std::move(out));
  }
  return grad;
}

double relative_gradient_error(const MetaPrototypes& analytic, const MetaPrototypes& numeric) {
  if (analytic.num_groups() != numeric.num_groups()) return std::numeric_limits<double>::infinity();
  double diff = 0.0, scale = 0.0;
  for (std::size_t g = 0; g < analytic.num_groups(); ++g) {
    if (analytic.points[g].rows() != numeric.points[g].rows() || analytic.points[g].cols() != numeric.points[g].cols()) {
      return std::numeric_limits<double>::infinity();
    }
    diff = std::max(diff, (analytic.points[g] - numeric.points[g]).cwiseAbs().maxCoeff());
    scale = std::max({scale, analytic.points[g].cwiseAbs().maxCoeff(), numeric.points[g].cwiseAbs().maxCoeff()});
  }
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

ExhaustiveResult exhaustive_optimum(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M) {
  if (spec.kind == ObjectiveKind::mmd_single) throw ValidationError("exhaustive oracle: per-group objectives only");
  ExhaustiveResult out;
  out.best.M = M;
  out.best.prototypes.resize(data.num_groups());
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    const auto& members = data.members(g);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& combo : combinations(static_cast<int>(members.size()), static_cast<int>(M))) {
      std::vector<int> rows;
      for (const int c : combo) rows.push_back(members[static_cast<std::size_t>(c)]);
      const double v = group_utility(data.gather(rows), g, data, spec);
      if (v > best) {
        best = v;
        out.best.prototypes[g] = rows;
      }
    }
    out.value += best;
  }
  return out;
}

SelectionProbe random_probe(const GroupedDataset& data, const ObjectiveSpec& spec, Rng& rng) {
  SelectionProbe probe;
  probe.selection.prototypes.resize(data.num_groups());
  GreedyState state(data, spec);
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    std::vector<int> members = data.members(g);
    if (members.size() < 2) throw ValidationError("random_probe: every group needs two members");
    rng.shuffle(std::span<int>(members));
    const std::size_t k = 1 + rng.uniform_below(std::min<std::size_t>(3, members.size() - 1));
    for (std::size_t i = 0; i < k; ++i) {
      state.add(members[i]);
      probe.selection.prototypes[g].push_back(members[i]);
    }
  }
  std::vector<int> free;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!state.is_selected(static_cast<int>(i))) free.push_back(static_cast<int>(i));
  }
  probe.candidate = free[rng.uniform_below(free.size())];
  probe.gain = state.marginal_gain(probe.candidate);
  Summary grown = probe.selection;
  grown.prototypes[static_cast<std::size_t>(data.group_of(static_cast<std::size_t>(probe.candidate)))].push_back(
      probe.candidate);
  probe.difference = utility(grown, data, spec) - utility(probe.selection, data, spec);
  return probe;
}

QpResult svm_dual_qp(const Matrix& X, std::span<const int> y, double C, double gamma, int max_iterations,
                     double tolerance) {
  const auto n = static_cast<std::size_t>(X.rows());
  Eigen::MatrixXd Q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Q(i, j) = y[i] * y[j] * static_cast<double>(k_rbf(X, static_cast<Eigen::Index>(i), X, static_cast<Eigen::Index>(j), gamma));
    }
  }
  const double L = std::max(1e-12, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().maxCoeff());
  auto objective = [&](const std::vector<double>& a) {
    const Eigen::Map<const Eigen::VectorXd> v(a.data(), static_cast<Eigen::Index>(n));
    return v.sum() - 0.5 * v.dot(Q * v);
  };

  // Accelerated projected gradient with a restart whenever the objective drops.
  std::vector<double> alpha(n, 0.0), z = alpha;
  double t = 1.0;
  double f = objective(alpha);
  QpResult out;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)) - Q * zv;
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = z[i] + grad[static_cast<Eigen::Index>(i)] / L;
    std::vector<double> next = project(step, y, C);
    const double f_next = objective(next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - alpha[i]));
    out.iterations = it + 1;
    if (f_next < f && t > 1.0) {
      // Restart from the last iterate with plain gradient steps.
      t = 1.0;
      z = alpha;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < n; ++i) z[i] = next[i] + ((t - 1.0) / t_next) * (next[i] - alpha[i]);
    alpha = std::move(next);
    f = f_next;
    t = t_next;
    if (change < tolerance) break;
  }
  out.alpha = alpha;
  out.objective = f;
  return out;
}

}  // namespace compsumm::oracle
