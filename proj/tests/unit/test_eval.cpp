#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "compsumm/eval.hpp"
#include "compsumm/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace compsumm;

namespace {

LabeledPrototypeSet two_blobs(std::size_t per_class, double separation, std::uint64_t seed) {
  return LabeledPrototypeSet::from_dataset(synthetic::gaussian_groups(2, per_class, 2, separation, seed));
}

std::vector<int> signs(const std::vector<int>& labels) {
  std::vector<int> y;
  for (int l : labels) y.push_back(l == 1 ? 1 : -1);
  return y;
}

}  // namespace

TEST_CASE("1-nn predicts the nearest prototype, earliest on ties") {
  LabeledPrototypeSet p;
  p.points.resize(3, 1);
  p.points << -1.0, 1.0, 5.0;
  p.labels = {0, 1, 2};
  const std::vector<double> at{5.0}, mid{0.0};
  CHECK(knn1_predict(p, at) == 2);
  CHECK(knn1_predict(p, mid) == 0);
}

TEST_CASE("1-nn matches a linear scan") {
  Rng rng(41);
  LabeledPrototypeSet p;
  p.points.resize(20, 3);
  for (Eigen::Index i = 0; i < p.points.size(); ++i) p.points.data()[i] = rng.normal();
  for (int i = 0; i < 20; ++i) p.labels.push_back(static_cast<int>(rng.uniform_below(3)));
  Matrix Q(50, 3);
  for (Eigen::Index i = 0; i < Q.size(); ++i) Q.data()[i] = rng.normal();
  const auto pred = knn1_predict(p, Q);
  for (Eigen::Index q = 0; q < 50; ++q) {
    int best = 0;
    for (Eigen::Index i = 1; i < 20; ++i)
      if (squared_distance(row_span(p.points, i), row_span(Q, q)) < squared_distance(row_span(p.points, best), row_span(Q, q)))
        best = static_cast<int>(i);
    CHECK(pred[static_cast<std::size_t>(q)] == p.labels[static_cast<std::size_t>(best)]);
  }
}

TEST_CASE("balanced accuracy examples") {
  std::vector<int> truth, pred;
  for (int i = 0; i < 10; ++i) {
    truth.push_back(1);
    pred.push_back(i < 8 ? 1 : 0);
  }
  for (int i = 0; i < 40; ++i) {
    truth.push_back(0);
    pred.push_back(i < 20 ? 0 : 1);
  }
  CHECK(balanced_accuracy(pred, truth) == doctest::Approx(0.65));
  CHECK(balanced_accuracy(truth, truth) == 1.0);
  const std::vector<int> constant(truth.size(), 0);
  CHECK(balanced_accuracy(constant, truth) == 0.5);

  // relabelling the classes leaves the score unchanged
  std::vector<int> t2, p2;
  for (int v : truth) t2.push_back(1 - v);
  for (int v : pred) p2.push_back(1 - v);
  CHECK(balanced_accuracy(p2, t2) == doctest::Approx(0.65));

  CHECK_THROWS_AS(balanced_accuracy(pred, std::vector<int>{1}), ValidationError);
  CHECK_THROWS_AS(balanced_accuracy(pred, truth, 3), ValidationError);
}

TEST_CASE("svm separates separable blobs") {
  const LabeledPrototypeSet p = two_blobs(20, 6.0, 42);
  SvmOptions o;
  o.C = 10.0;
  o.kernel = KernelSpec(0.5);
  const SvmModel m = svm_train(p, o);
  CHECK(balanced_accuracy(m.predict(p.points), p.labels) == 1.0);
  const BinarySvm& b = m.machines()[0];
  CHECK(b.converged);
  CHECK(b.kkt_gap <= 1e-3);
  for (double a : b.alpha) {
    CHECK(a >= 0.0);
    CHECK(a <= o.C);
  }
}

TEST_CASE("svm cannot fit conflicting duplicates") {
  LabeledPrototypeSet p;
  p.points.resize(2, 2);
  p.points << 1.0, 1.0, 1.0, 1.0;
  p.labels = {0, 1};
  SvmOptions o;
  o.C = 0.1;
  const SvmModel m = svm_train(p, o);
  CHECK(balanced_accuracy(m.predict(p.points), p.labels) <= 0.5 + 1e-12);
}

TEST_CASE("svm dual objective matches the slow QP") {
  Rng rng(43);
  for (int t = 0; t < 5; ++t) {
    const LabeledPrototypeSet p = two_blobs(10, 1.0, rng.next_u64());
    const auto y = signs(p.labels);
    SvmOptions o;
    o.C = 1.0;
    o.kernel = KernelSpec(0.5);
    const BinarySvm b = svm_train_binary(p.points, y, o);
    const oracle::QpResult q = oracle::svm_dual_qp(p.points, y, 1.0, 0.5);
    CHECK(std::abs(b.dual_objective - q.objective) < 1e-3);
    CHECK(std::abs(b.dual_objective - svm_dual_objective(b.alpha, p.points, y, o.kernel)) < 1e-9);
  }
}

TEST_CASE("svm decisions do not depend on presentation order") {
  const LabeledPrototypeSet p = two_blobs(15, 1.5, 44);
  const auto y = signs(p.labels);
  std::vector<int> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  Matrix Xr(p.points.rows(), p.points.cols());
  std::vector<int> yr;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    Xr.row(static_cast<Eigen::Index>(i)) = p.points.row(perm[i]);
    yr.push_back(y[static_cast<std::size_t>(perm[i])]);
  }
  SvmOptions o;
  o.C = 1.0;
  o.kernel = KernelSpec(0.4);
  o.tolerance = 1e-8;
  const BinarySvm a = svm_train_binary(p.points, y, o);
  const BinarySvm b = svm_train_binary(Xr, yr, o);
  for (Eigen::Index i = 0; i < p.points.rows(); ++i)
    CHECK(std::abs(a.decision(row_span(p.points, i)) - b.decision(row_span(p.points, i))) < 1e-6);
}

TEST_CASE("one-vs-rest handles three classes") {
  const LabeledPrototypeSet p = LabeledPrototypeSet::from_dataset(synthetic::gaussian_groups(3, 15, 2, 8.0, 45));
  SvmOptions o;
  o.C = 10.0;
  o.kernel = KernelSpec(0.3);
  const SvmModel m = svm_train(p, o);
  CHECK(m.machines().size() == 3);
  CHECK(m.classes() == std::vector<int>{0, 1, 2});
  CHECK(balanced_accuracy(m.predict(p.points), p.labels) == 1.0);
}

TEST_CASE("svm training needs two classes") {
  LabeledPrototypeSet p;
  p.points.resize(2, 1);
  p.points << 0.0, 1.0;
  p.labels = {3, 3};
  CHECK_THROWS_AS(svm_train(p, SvmOptions{}), ValidationError);
}

TEST_CASE("prototype sets from summaries keep group labels") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 4, 2, 1.0, 46);
  Summary s;
  s.M = 1;
  s.prototypes = {{2}, {5}};
  const auto p = LabeledPrototypeSet::from_summary(s, data);
  CHECK(p.labels == std::vector<int>{0, 1});
  CHECK(p.points.row(1) == data.points().row(5));
  CHECK(p.classes() == std::vector<int>{0, 1});
}
