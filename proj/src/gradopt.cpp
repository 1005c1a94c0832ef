#include "compsumm/gradopt.hpp"

#include <atomic>
#include <cmath>

#include "compsumm/baselines.hpp"
#include "compsumm/greedy.hpp"
#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"

namespace compsumm {

namespace {

std::atomic<double> g_gradient_fault{0.0};

double self_sum(const GroupedDataset& data, const std::vector<int>& rows, double gamma) {
  double off = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto xa = data.row(static_cast<std::size_t>(rows[a]));
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      off += std::exp(-gamma * squared_distance(xa, data.row(static_cast<std::size_t>(rows[b]))));
    }
  }
  return static_cast<double>(rows.size()) + 2.0 * off;
}

Vector flatten(const MetaPrototypes& meta) {
  Eigen::Index total = 0;
  for (const auto& m : meta.points) total += m.size();
  Vector out(total);
  Eigen::Index offset = 0;
  for (const auto& m : meta.points) {
    out.segment(offset, m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
    offset += m.size();
  }
  return out;
}

void unflatten(const Vector& flat, MetaPrototypes& meta) {
  Eigen::Index offset = 0;
  for (auto& m : meta.points) {
    Eigen::Map<Vector>(m.data(), m.size()) = flat.segment(offset, m.size());
    offset += m.size();
  }
}

}  // namespace

namespace testing {
void set_gradient_fault(double factor) { g_gradient_fault.store(factor); }
}  // namespace testing

std::string_view to_string(MetaInit init) {
  switch (init) {
    case MetaInit::greedy: return "greedy";
    case MetaInit::kmeans: return "kmeans";
    case MetaInit::random: return "random";
  }
  return "unknown";
}

MetaInit parse_meta_init(std::string_view name) {
  if (name == "greedy") return MetaInit::greedy;
  if (name == "kmeans") return MetaInit::kmeans;
  if (name == "random") return MetaInit::random;
  throw ValidationError("unknown initialisation '" + std::string(name) + "'");
}

void GradConfig::validate() const {
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (history_size < 1) throw ValidationError("history_size must be at least 1");
  if (!(gradient_tolerance > 0.0)) throw ValidationError("gradient_tolerance must be positive");
}

MetaObjective::MetaObjective(const GroupedDataset& data, const ObjectiveSpec& spec) : data_(data), spec_(spec) {
  spec_.validate();
  if (spec_.kind != ObjectiveKind::mmd_diff && spec_.kind != ObjectiveKind::mmd_div) {
    throw ValidationError("objective " + std::string(to_string(spec_.kind)) + " has no continuous form");
  }
  if (data.num_groups() < 2 && spec_.lambda > 0.0) {
    throw ValidationError("objective " + std::string(to_string(spec_.kind)) + " with lambda > 0 needs two groups");
  }

  const double gamma = spec_.kernel.gamma();
  const bool need_other = spec_.kind == ObjectiveKind::mmd_diff && spec_.lambda > 0.0;
  const std::size_t G = data.num_groups();
  std::vector<double> own(G, 0.0);
  std::vector<double> cross(G, 0.0);  // sum over (member, non-member) pairs
  parallel_for(G, [&](std::size_t g) {
    own[g] = self_sum(data, data.members(g), gamma);
    if (need_other) {
      double c = 0.0;
      for (const int i : data.members(g)) {
        const auto xi = data.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < data.size(); ++j) {
          if (static_cast<std::size_t>(data.group_of(j)) != g) c += std::exp(-gamma * squared_distance(xi, data.row(j)));
        }
      }
      cross[g] = c;
    }
  });
  double all_pairs = 0.0;
  for (std::size_t g = 0; g < G; ++g) all_pairs += own[g] + cross[g];

  constants_.assign(G, 0.0);
  for (std::size_t g = 0; g < G; ++g) {
    const auto n = static_cast<double>(data.group_size(g));
    constants_[g] = -own[g] / (n * n);
    if (need_other) {
      const auto m = static_cast<double>(data.size() - data.group_size(g));
      constants_[g] += spec_.lambda * (all_pairs - own[g] - 2.0 * cross[g]) / (m * m);
    }
  }
}

double MetaObjective::group_value(const Matrix& protos, std::size_t g, Matrix* grad) const {
  const Eigen::Index M = protos.rows();
  const auto d = protos.cols();
  if (M == 0) throw ValidationError("group '" + data_.group_names()[g] + "' has no meta prototypes");
  if (static_cast<std::size_t>(d) != data_.dim()) throw ValidationError("meta prototype dimension mismatch");

  const double gamma = spec_.kernel.gamma();
  const double lambda = spec_.lambda;
  const bool use_other = lambda > 0.0;
  const auto m = static_cast<double>(M);
  const auto n_own = static_cast<double>(data_.group_size(g));
  const auto n_other = static_cast<double>(data_.size() - data_.group_size(g));

  double s_aa = 0.0;
  double s_own = 0.0;
  double s_other = 0.0;
  if (grad) grad->setZero(M, d);

  Vector own_kx(d), other_kx(d), aa_kx(d);
  for (Eigen::Index l = 0; l < M; ++l) {
    const auto al = row_span(protos, l);
    double own_k = 0.0, other_k = 0.0, aa_k = 0.0;
    own_kx.setZero();
    other_kx.setZero();
    aa_kx.setZero();
    for (std::size_t i = 0; i < data_.size(); ++i) {
      const bool member = static_cast<std::size_t>(data_.group_of(i)) == g;
      if (!member && !use_other) continue;
      const auto xi = data_.row(i);
      const double k = std::exp(-gamma * squared_distance(al, xi));
      const Eigen::Map<const Vector> x(xi.data(), d);
      if (member) {
        own_k += k;
        if (grad) own_kx.noalias() += k * x;
      } else {
        other_k += k;
        if (grad) other_kx.noalias() += k * x;
      }
    }
    for (Eigen::Index i = 0; i < M; ++i) {
      const double k = std::exp(-gamma * squared_distance(al, row_span(protos, i)));
      aa_k += k;
      if (grad) aa_kx.noalias() += k * protos.row(i).transpose();
    }
    s_own += own_k;
    s_other += other_k;
    s_aa += aa_k;

    if (grad) {
      const Vector a = protos.row(l).transpose();
      // sum_i k(a_i, a_l)(a_i - a_l) and its data counterparts.
      const Vector aa_term = aa_kx - aa_k * a;
      const Vector own_term = own_kx - own_k * a;
      const Vector other_term = other_kx - other_k * a;
      Vector gl = -(4.0 * gamma / (m * m)) * aa_term + (4.0 * gamma / (m * n_own)) * own_term;
      if (use_other) {
        if (spec_.kind == ObjectiveKind::mmd_diff) {
          gl += lambda * ((4.0 * gamma / (m * m)) * aa_term - (4.0 * gamma / (m * n_other)) * other_term);
        } else {
          gl -= (4.0 * gamma * lambda / (m * n_other)) * other_term;
        }
      }
      grad->row(l) = gl.transpose();
    }
  }

  double value = constants_[g] - s_aa / (m * m) + 2.0 * s_own / (m * n_own);
  if (use_other) {
    if (spec_.kind == ObjectiveKind::mmd_diff) {
      value += lambda * (s_aa / (m * m) - 2.0 * s_other / (m * n_other));
    } else {
      value -= 2.0 * lambda * s_other / (m * n_other);
    }
  }
  return value;
}

MetaEvaluation MetaObjective::evaluate(const MetaPrototypes& meta) const {
  if (meta.num_groups() != data_.num_groups()) throw ValidationError("meta prototype group count mismatch");
  if (!meta.all_finite()) throw NumericError("meta prototypes contain non-finite values");
  const std::size_t G = meta.num_groups();
  MetaEvaluation out;
  out.gradient.points.resize(G);
  std::vector<double> values(G, 0.0);
  parallel_for(G, [&](std::size_t g) { values[g] = group_value(meta.points[g], g, &out.gradient.points[g]); });
  for (const double v : values) out.value += v;
  const double fault = g_gradient_fault.load();
  if (fault != 0.0) {
    for (auto& m : out.gradient.points) m *= 1.0 + fault;
  }
  return out;
}

double MetaObjective::value(const MetaPrototypes& meta) const {
  if (meta.num_groups() != data_.num_groups()) throw ValidationError("meta prototype group count mismatch");
  if (!meta.all_finite()) throw NumericError("meta prototypes contain non-finite values");
  double total = 0.0;
  for (std::size_t g = 0; g < meta.num_groups(); ++g) total += group_value(meta.points[g], g, nullptr);
  return total;
}

MetaEvaluation grad_meta_objective(const MetaPrototypes& meta, const GroupedDataset& data, const ObjectiveSpec& spec) {
  return MetaObjective(data, spec).evaluate(meta);
}

MetaPrototypes initial_meta(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M,
                            const GradConfig& config) {
  if (M == 0 || M > data.min_group_size()) {
    throw ValidationError("M = " + std::to_string(M) + " must lie in [1, " + std::to_string(data.min_group_size()) + "]");
  }
  switch (config.init) {
    case MetaInit::greedy:
      return MetaPrototypes::from_summary(greedy_select(data, spec, M), data);
    case MetaInit::kmeans: {
      MetaPrototypes meta;
      for (std::size_t g = 0; g < data.num_groups(); ++g) {
        meta.points.push_back(kmeans_cluster(data.gather(data.members(g)), M, derive_seed(config.seed, g)).centers);
      }
      return meta;
    }
    case MetaInit::random: {
      MetaPrototypes meta;
      for (std::size_t g = 0; g < data.num_groups(); ++g) {
        Rng rng(derive_seed(config.seed, g));
        std::vector<int> members = data.members(g);
        rng.shuffle(std::span<int>(members));
        members.resize(M);
        meta.points.push_back(data.gather(members));
      }
      return meta;
    }
  }
  throw ValidationError("unknown initialisation");
}

MetaOptimization optimize_meta_from(const GroupedDataset& data, const ObjectiveSpec& spec, MetaPrototypes init,
                                    const GradConfig& config) {
  config.validate();
  const MetaObjective objective(data, spec);
  MetaPrototypes work = init;

  const ObjectiveFunction negated = [&](const Vector& x, Vector& grad) {
    unflatten(x, work);
    if (!work.all_finite()) return std::numeric_limits<double>::infinity();
    const MetaEvaluation eval = objective.evaluate(work);
    grad = -flatten(eval.gradient);
    return -eval.value;
  };

  LbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.history_size = config.history_size;
  options.gradient_tolerance = config.gradient_tolerance;
  const LbfgsResult result = lbfgs_minimize(negated, flatten(init), options);

  MetaOptimization out;
  out.meta = init;
  unflatten(result.x, out.meta);
  out.initial = std::move(init);
  out.initial_value = -result.initial_value;
  out.final_value = -result.value;
  out.iterations = result.iterations;
  out.status = result.status;
  out.trajectory.reserve(result.trajectory.size());
  for (const double v : result.trajectory) out.trajectory.push_back(-v);
  return out;
}

MetaOptimization optimize_meta(const GroupedDataset& data, const ObjectiveSpec& spec, std::size_t M,
                               const GradConfig& config) {
  config.validate();
  return optimize_meta_from(data, spec, initial_meta(data, spec, M, config), config);
}

Summary snap(const MetaPrototypes& meta, const GroupedDataset& data) {
  if (meta.num_groups() != data.num_groups()) throw ValidationError("meta prototype group count mismatch");
  Summary out;
  out.prototypes.resize(data.num_groups());
  out.provenance.optimizer = "gradient";
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    const Matrix& points = meta.points[g];
    const auto& members = data.members(g);
    if (static_cast<std::size_t>(points.rows()) > members.size()) {
      throw ValidationError("group '" + data.group_names()[g] + "' has fewer members than meta prototypes");
    }
    std::vector<char> used(members.size(), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      std::size_t best = members.size();
      double best_dist = 0.0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (used[j]) continue;
        const double dist = squared_distance(row_span(points, i), data.row(static_cast<std::size_t>(members[j])));
        if (best == members.size() || dist < best_dist) {
          best = j;
          best_dist = dist;
        }
      }
      used[best] = 1;
      out.prototypes[g].push_back(members[best]);
    }
    out.M = std::max(out.M, static_cast<std::size_t>(points.rows()));
  }
  return out;
}

}  // namespace compsumm
