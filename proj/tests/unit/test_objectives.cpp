#include <cmath>
#include <vector>

#include "compsumm/objectives.hpp"
#include "compsumm/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace compsumm;

namespace {

Matrix normal_matrix(Eigen::Index n, Eigen::Index d, Rng& rng, double shift = 0.0) {
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal() + shift;
  return X;
}

Summary first_members(const GroupedDataset& data, std::size_t M) {
  Summary s;
  s.M = M;
  for (std::size_t g = 0; g < data.num_groups(); ++g)
    s.prototypes.emplace_back(data.members(g).begin(), data.members(g).begin() + static_cast<long>(M));
  return s;
}

ObjectiveSpec make_spec(ObjectiveKind kind, double lambda, double gamma) {
  ObjectiveSpec spec;
  spec.kind = kind;
  spec.lambda = lambda;
  spec.kernel = KernelSpec(gamma);
  return spec;
}

// Rows of `data` outside group g.
Matrix others(const GroupedDataset& data, std::size_t g) {
  std::vector<int> rows;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.group_of(i) != static_cast<int>(g)) rows.push_back(static_cast<int>(i));
  return data.gather(rows);
}

}  // namespace

TEST_CASE("mmd2 basics") {
  Rng rng(1);
  const Matrix X = normal_matrix(6, 3, rng);
  CHECK(std::abs(mmd2(X, X, KernelSpec(0.5))) < 1e-12);
  Matrix x(1, 2), y(1, 2);
  x << 0.0, 0.0;
  y << 1.0, 1.0;
  CHECK(mmd2(x, y, KernelSpec(0.5)) == doctest::Approx(2.0 - 2.0 * std::exp(-1.0)));
  CHECK(mmd2(x, x, KernelSpec(0.5)) == 0.0);
  CHECK_THROWS_AS(mmd2(Matrix(0, 2), y, KernelSpec(1.0)), ValidationError);
}

TEST_CASE("mmd2 matches the triple-loop oracle, is symmetric and nonnegative") {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const Matrix X = normal_matrix(7, 3, rng);
    const Matrix Y = normal_matrix(5, 3, rng, 0.3);
    const double g = 0.1 + rng.uniform01();
    const double v = mmd2(X, Y, KernelSpec(g));
    CHECK(std::abs(v - oracle::mmd2(X, Y, g)) < 1e-12);
    CHECK(std::abs(v - mmd2(Y, X, KernelSpec(g))) < 1e-12);
    CHECK(v >= -1e-12);
  }
}

TEST_CASE("mmd2 to a growing subsample trends to zero") {
  Rng rng(3);
  const Matrix X = normal_matrix(64, 2, rng);
  std::vector<double> values;
  for (Eigen::Index n : {1, 2, 4, 8, 16, 32, 64}) values.push_back(mmd2(X, X.topRows(n), KernelSpec(0.5)));
  int inversions = 0;
  for (std::size_t k = 1; k < values.size(); ++k) inversions += values[k] > values[k - 1];
  CHECK(inversions <= 1);
  CHECK(values.back() < 1e-12);
}

TEST_CASE("nn utility") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 5, 2, 2.0, 4);
  Summary all = first_members(data, 5);
  CHECK(utility_nn(all, data, KernelSpec(0.4)) == doctest::Approx(10.0));

  Matrix same(3, 2);
  same.setConstant(0.7);
  const GroupedDataset one(same, {0, 0, 0}, {"g"});
  CHECK(utility_nn(first_members(one, 1), one, KernelSpec(2.0)) == doctest::Approx(3.0));

  Summary s = first_members(data, 2);
  double direct = 0.0;
  for (std::size_t g = 0; g < 2; ++g) {
    for (int i : data.members(g)) {
      double best = 0.0;
      for (int p : s.prototypes[g]) best = std::max(best, rbf(data.row(i), data.row(p), KernelSpec(0.4)));
      direct += best;
    }
  }
  CHECK(std::abs(utility_nn(s, data, KernelSpec(0.4)) - direct) < 1e-12);

  s.prototypes[1].clear();
  CHECK_THROWS_AS(utility_nn(s, data, KernelSpec(0.4)), ValidationError);
}

TEST_CASE("mmd-diff composes from mmd2 terms") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 6, 3, 1.0, 5);
  const Summary s = first_members(data, 2);
  const double g = 0.3;
  double expected = 0.0;
  for (std::size_t grp = 0; grp < 2; ++grp) {
    const Matrix P = data.gather(s.prototypes[grp]);
    expected += -oracle::mmd2(P, data.gather(data.members(grp)), g) + oracle::mmd2(P, others(data, grp), g);
  }
  CHECK(std::abs(utility_diff(s, data, make_spec(ObjectiveKind::mmd_diff, 1.0, g)) - expected) < 1e-12);
  CHECK(utility(s, data, make_spec(ObjectiveKind::mmd_diff, 1.0, g)) ==
        utility_diff(s, data, make_spec(ObjectiveKind::mmd_diff, 1.0, g)));
}

TEST_CASE("mmd-div matches direct double sums") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 6, 3, 1.0, 6);
  const Summary s = first_members(data, 3);
  const double g = 0.5, lambda = 0.7;
  const KernelSpec k(g);
  double expected = 0.0;
  for (std::size_t grp = 0; grp < 2; ++grp) {
    const Matrix P = data.gather(s.prototypes[grp]);
    const Matrix O = others(data, grp);
    double cross = 0.0;
    for (Eigen::Index a = 0; a < P.rows(); ++a)
      for (Eigen::Index b = 0; b < O.rows(); ++b) cross += rbf(row_span(P, a), row_span(O, b), k);
    cross /= static_cast<double>(P.rows() * O.rows());
    expected += -oracle::mmd2(P, data.gather(data.members(grp)), g) - 2.0 * lambda * cross;
  }
  CHECK(std::abs(utility_div(s, data, make_spec(ObjectiveKind::mmd_div, lambda, g)) - expected) < 1e-12);
}

TEST_CASE("diff and div agree at lambda zero") {
  const GroupedDataset data = synthetic::gaussian_groups(3, 5, 2, 1.0, 7);
  const Summary s = first_members(data, 2);
  const double d = utility_diff(s, data, make_spec(ObjectiveKind::mmd_diff, 0.0, 0.8));
  CHECK(d == utility_div(s, data, make_spec(ObjectiveKind::mmd_div, 0.0, 0.8)));
  double own = 0.0;
  for (std::size_t g = 0; g < 3; ++g)
    own -= mmd2(data.gather(s.prototypes[g]), data.gather(data.members(g)), KernelSpec(0.8));
  CHECK(std::abs(d - own) < 1e-12);
}

TEST_CASE("mmd-diff is symmetric for mirrored groups") {
  Rng rng(8);
  const Matrix A = normal_matrix(6, 2, rng);
  Matrix X(12, 2);
  X << A, A;
  std::vector<int> groups(12, 0);
  for (int i = 6; i < 12; ++i) groups[i] = 1;
  const GroupedDataset data(X, groups, {"a", "b"});
  const ObjectiveSpec spec = make_spec(ObjectiveKind::mmd_diff, 1.0, 0.5);
  const Matrix P = data.gather(std::vector<int>{0, 2});
  CHECK(group_utility(P, 0, data, spec) == doctest::Approx(group_utility(P, 1, data, spec)).epsilon(1e-12));
}

TEST_CASE("separated groups make the div cross term vanish") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 5, 2, 1000.0, 9);
  const Summary s = first_members(data, 2);
  const ObjectiveSpec spec = make_spec(ObjectiveKind::mmd_div, 5.0, 0.5);
  double own = 0.0;
  for (std::size_t g = 0; g < 2; ++g)
    own -= mmd2(data.gather(s.prototypes[g]), data.gather(data.members(g)), KernelSpec(0.5));
  CHECK(std::abs(utility_div(s, data, spec) - own) < 1e-12);
}

TEST_CASE("meta prototypes on data rows reproduce summary values") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 7, 3, 1.0, 10);
  const Summary s = first_members(data, 3);
  const MetaPrototypes meta = MetaPrototypes::from_summary(s, data);
  for (auto kind : {ObjectiveKind::mmd_diff, ObjectiveKind::mmd_div}) {
    const ObjectiveSpec spec = make_spec(kind, 1.3, 0.4);
    CHECK(std::abs(utility(meta, data, spec) - utility(s, data, spec)) < 1e-12);
  }
}

TEST_CASE("objective errors") {
  const GroupedDataset one = synthetic::gaussian_groups(1, 4, 2, 0.0, 11);
  const Summary s = first_members(one, 1);
  CHECK_THROWS_AS(utility_diff(s, one, make_spec(ObjectiveKind::mmd_diff, 1.0, 1.0)), ValidationError);
  CHECK_NOTHROW(utility_diff(s, one, make_spec(ObjectiveKind::mmd_diff, 0.0, 1.0)));
  CHECK_THROWS_AS(make_spec(ObjectiveKind::mmd_div, -1.0, 1.0).validate(), ValidationError);

  const GroupedDataset two = synthetic::gaussian_groups(2, 4, 2, 0.0, 12);
  Summary bad = first_members(two, 1);
  bad.prototypes[0][0] = two.members(1)[0];
  CHECK_THROWS_AS(bad.validate(two), ValidationError);
  Summary dup = first_members(two, 2);
  dup.prototypes[0][1] = dup.prototypes[0][0];
  CHECK_THROWS_AS(dup.validate(two), ValidationError);
}

TEST_CASE("single objective ignores labels") {
  const GroupedDataset data = synthetic::gaussian_groups(2, 5, 2, 1.0, 13);
  const Summary s = first_members(data, 2);
  std::vector<int> rows;
  for (const auto& p : s.prototypes) rows.insert(rows.end(), p.begin(), p.end());
  CHECK(std::abs(utility_single(s, data, KernelSpec(0.6)) +
                 oracle::mmd2(data.gather(rows), data.points(), 0.6)) < 1e-12);
}

TEST_CASE("objective names round-trip") {
  for (auto kind : {ObjectiveKind::nn, ObjectiveKind::mmd_diff, ObjectiveKind::mmd_div, ObjectiveKind::mmd_single})
    CHECK(parse_objective_kind(to_string(kind)) == kind);
  CHECK_THROWS_AS(parse_objective_kind("bogus"), ValidationError);
}
