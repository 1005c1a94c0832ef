#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "commands.hpp"
#include "compsumm/gradopt.hpp"
#include "compsumm/greedy.hpp"
#include "compsumm/objectives.hpp"
#include "compsumm/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace compsumm::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct SuiteResult {
  bool pass = true;
  std::string detail;
};

SuiteResult mmd_suite() {
  Rng rng(11);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_below(15));
    const auto m = static_cast<Eigen::Index>(1 + rng.uniform_below(15));
    const auto d = static_cast<Eigen::Index>(1 + rng.uniform_below(6));
    Matrix X(n, d), Y(m, d);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < Y.size(); ++i) Y.data()[i] = rng.normal() + 0.5;
    const double gamma = 0.05 + rng.uniform01();
    worst = std::max(worst, std::abs(mmd2(X, Y, KernelSpec(gamma)) - oracle::mmd2(X, Y, gamma)));
  }
  return {worst <= 1e-12, "max |error| " + sci(worst)};
}

SuiteResult gain_suite() {
  Rng rng(12);
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const GroupedDataset data = synthetic::gaussian_groups(2, 8, 3, 1.5, rng.next_u64());
    ObjectiveSpec spec;
    spec.kind = t % 3 == 0 ? ObjectiveKind::nn : (t % 3 == 1 ? ObjectiveKind::mmd_diff : ObjectiveKind::mmd_div);
    spec.lambda = 0.5 + rng.uniform01();
    spec.kernel = KernelSpec(0.1 + rng.uniform01());
    const oracle::SelectionProbe probe = oracle::random_probe(data, spec, rng);
    worst = std::max(worst, std::abs(probe.gain - probe.difference));
  }
  return {worst <= 1e-8, "max |error| " + sci(worst)};
}

SuiteResult gradient_suite() {
  Rng rng(13);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const GroupedDataset data = synthetic::gaussian_groups(2, 10, 3, 1.0, rng.next_u64());
    ObjectiveSpec spec;
    spec.kind = t % 2 == 0 ? ObjectiveKind::mmd_diff : ObjectiveKind::mmd_div;
    spec.lambda = 0.5 + rng.uniform01();
    spec.kernel = KernelSpec(0.1 + 0.5 * rng.uniform01());
    const MetaPrototypes meta = synthetic::random_meta(data, 3, 0.3, rng.next_u64());
    const MetaEvaluation analytic = grad_meta_objective(meta, data, spec);
    const MetaPrototypes numeric = oracle::finite_difference_gradient(meta, data, spec, 1e-5);
    worst = std::max(worst, oracle::relative_gradient_error(analytic.gradient, numeric));
  }
  return {worst <= 1e-5, "max relative error " + sci(worst)};
}

SuiteResult exhaustive_suite() {
  Rng rng(14);
  double worst_ratio = 1.0;
  const double bound = 1.0 - std::exp(-1.0);
  for (int t = 0; t < 10; ++t) {
    const GroupedDataset data = synthetic::gaussian_groups(2, 8, 2, 1.0, rng.next_u64());
    ObjectiveSpec spec;
    spec.kind = ObjectiveKind::nn;
    spec.kernel = KernelSpec(0.2 + rng.uniform01());
    const std::size_t M = 1 + rng.uniform_below(3);
    const double greedy = utility(greedy_select(data, spec, M), data, spec);
    const double opt = oracle::exhaustive_optimum(data, spec, M).value;
    worst_ratio = std::min(worst_ratio, greedy / opt);
  }
  return {worst_ratio >= bound, "min greedy/OPT " + sci(worst_ratio)};
}

}  // namespace

bool run_selftest(std::ostream& out, const SelftestOptions& options) {
  if (options.inject_gradient_fault) testing::set_gradient_fault(1e-3);
  const std::vector<std::pair<const char*, std::function<SuiteResult()>>> suites{
      {"mmd2-brute-force", mmd_suite},
      {"greedy-marginal-gains", gain_suite},
      {"gradient-finite-differences", gradient_suite},
      {"greedy-vs-exhaustive", exhaustive_suite}};
  bool all = true;
  for (const auto& [name, run] : suites) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    out << (r.pass ? "PASS " : "FAIL ") << name << " (" << r.detail << ", " << timing << ")\n";
    all = all && r.pass;
  }
  testing::set_gradient_fault(0.0);
  out << (all ? "selftest passed\n" : "selftest FAILED\n");
  return all;
}

}  // namespace compsumm::cli
