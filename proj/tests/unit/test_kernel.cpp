#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "compsumm/kernel.hpp"
#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"
#include "doctest.h"

using namespace compsumm;

namespace {

Matrix normal_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  return X;
}

}  // namespace

TEST_CASE("rbf values") {
  const std::vector<double> o{0.0, 0.0}, e{1.0, 1.0};
  CHECK(rbf(o, o, KernelSpec(3.0)) == 1.0);
  CHECK(rbf(o, e, KernelSpec(0.5)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(rbf(o, e, KernelSpec(0.5)) == rbf(e, o, KernelSpec(0.5)));
  double prev = 1.0;
  for (double g : {0.1, 1.0, 10.0, 100.0}) {
    const double v = rbf(o, e, KernelSpec(g));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-80);
}

TEST_CASE("kernel spec rejects nonpositive widths") {
  CHECK_THROWS_AS(KernelSpec(0.0), ValidationError);
  CHECK_THROWS_AS(KernelSpec(-1.0), ValidationError);
  CHECK_THROWS_AS(KernelSpec(std::nan("")), ValidationError);
}

TEST_CASE("rbf scale law") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(3), y(3), cx(3), cy(3);
    const double c = 0.5 + rng.uniform01() * 2.0;
    for (int k = 0; k < 3; ++k) {
      x[k] = rng.normal();
      y[k] = rng.normal();
      cx[k] = c * x[k];
      cy[k] = c * y[k];
    }
    const double g = 0.1 + rng.uniform01();
    CHECK(std::abs(rbf(cx, cy, KernelSpec(g)) - rbf(x, y, KernelSpec(g * c * c))) < 1e-12);
  }
}

TEST_CASE("self kernel matrix is symmetric with unit diagonal") {
  const Matrix X = normal_matrix(3, 2, 2);
  const KernelMatrix K = kernel_matrix(X, KernelSpec(0.7));
  REQUIRE(K.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(K(i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(K(i, j) == K(j, i));
  }
}

TEST_CASE("kernel matrix entries equal the scalar kernel") {
  const Matrix X = normal_matrix(100, 4, 3), Y = normal_matrix(50, 4, 4);
  for (int workers : {1, 3}) {
    set_worker_count(workers);
    const KernelMatrix K = kernel_matrix(X, Y, KernelSpec(0.3));
    REQUIRE(K.cols() == 50);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 100; ++i)
      for (Eigen::Index j = 0; j < 50; ++j)
        worst = std::max(worst, std::abs(K(i, j) - rbf(row_span(X, i), row_span(Y, j), KernelSpec(0.3))));
    CHECK(worst == 0.0);
  }
  set_worker_count(1);
  CHECK_THROWS(kernel_matrix(X, normal_matrix(2, 3, 5), KernelSpec(1.0)));
}

TEST_CASE("kernel matrix is positive semidefinite") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix X = normal_matrix(20, 3, seed);
    const Matrix K = kernel_matrix(X, KernelSpec(0.5)).values();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("median heuristic") {
  Matrix two(2, 1);
  two << 0.0, 2.0;
  CHECK(median_gamma(two, 100, 0) == doctest::Approx(0.25));

  Matrix same(4, 2);
  same.setConstant(1.5);
  CHECK_THROWS_AS(median_gamma(same, 100, 0), DataError);

  const Matrix X = normal_matrix(50, 2, 9);
  std::vector<double> d;
  for (Eigen::Index i = 0; i < 50; ++i)
    for (Eigen::Index j = i + 1; j < 50; ++j) d.push_back(squared_distance(row_span(X, i), row_span(X, j)));
  std::sort(d.begin(), d.end());
  REQUIRE(d.size() % 2 == 1);
  const double med = d[d.size() / 2];
  CHECK(median_gamma(X, 5000, 0) == doctest::Approx(1.0 / med).epsilon(1e-14));

  const double sampled = median_gamma(X, 300, 4);
  CHECK(sampled == median_gamma(X, 300, 4));
  CHECK(sampled == doctest::Approx(1.0 / med).epsilon(0.3));
}

TEST_CASE("median heuristic falls back to the mean of nonzero distances") {
  Matrix X(5, 1);
  X << 0.0, 0.0, 0.0, 0.0, 3.0;  // 6 of 10 pairs coincide
  CHECK(median_gamma(X, 100, 0) == doctest::Approx(1.0 / 9.0));
}
