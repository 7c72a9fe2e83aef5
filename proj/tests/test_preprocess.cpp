#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fpclasso/errors.hpp"
#include "fpclasso/preprocess.hpp"
#include "test_util.hpp"

using namespace fpc;

TEST_CASE("skewness closed forms") {
  Vector sym(5);
  sym << -2.0, -1.0, 0.0, 1.0, 2.0;
  CHECK(skewness(sym) == 0.0);
  Vector right(4);
  right << 0.0, 0.0, 0.0, 4.0;  // one large value pulls the third moment up
  CHECK(skewness(right) > 1.0);
  CHECK(skewness(-right) < -1.0);
  CHECK_THROWS_AS(skewness(Vector::Ones(5)), DegenerateColumn);
}

TEST_CASE("skew_adjust leaves symmetric and binary columns alone") {
  Vector sym(5);
  sym << -2.0, -1.0, 0.0, 1.0, 2.0;
  auto [out, shift] = skew_adjust(sym);
  CHECK_FALSE(shift.has_value());
  CHECK(out == sym);

  Vector binary(6);
  binary << 0, 1, 0, 1, 1, 0;
  auto [out2, shift2] = skew_adjust(binary);
  CHECK_FALSE(shift2.has_value());
  CHECK(out2 == binary);

  CHECK_THROWS_AS(skew_adjust(Vector::Constant(5, 3.0)), DegenerateColumn);
}

TEST_CASE("skew_adjust flattens an exponential sample") {
  Rng rng = make_rng(42);
  std::exponential_distribution<double> expo(1.0);
  Vector x(1000);
  for (Index i = 0; i < 1000; ++i) x[i] = expo(rng);

  const double raw_skew = skewness(x);
  CHECK(raw_skew > 1.5);
  CHECK(raw_skew < 2.5);

  auto [adjusted, shift] = skew_adjust(x);
  REQUIRE(shift.has_value());
  CHECK(std::abs(skewness(adjusted)) < 0.05);

  // Dense grid oracle over the shift: no candidate materially beats the
  // minimizer found by the scan + golden-section search.
  const double found = skewness(adjusted) * skewness(adjusted);
  const double min_x = x.minCoeff();
  const double range = x.maxCoeff() - min_x;
  double oracle_best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5000; ++k) {
    const double t = std::exp(std::log(1e-8 * range) +
                              (std::log(1e6 * range) - std::log(1e-8 * range)) * k / 4999.0);
    const double s = skewness(((x.array() - min_x) + t).log().matrix());
    oracle_best = std::min(oracle_best, s * s);
  }
  CHECK(found <= oracle_best + 1e-4);
}

TEST_CASE("skew_adjust never increases squared skewness") {
  Rng rng = make_rng(77);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (int rep = 0; rep < 12; ++rep) {
    Vector x(200);
    for (Index i = 0; i < 200; ++i) {
      switch (rep % 4) {
        case 0: x[i] = gauss(rng); break;
        case 1: x[i] = expo(rng); break;
        case 2: x[i] = unif(rng); break;
        default: x[i] = -expo(rng); break;  // left-skewed
      }
    }
    const double before = skewness(x);
    auto [adjusted, shift] = skew_adjust(x);
    const double after = skewness(adjusted);
    CHECK(after * after <= before * before + 1e-12);
    if (!shift.has_value()) CHECK(adjusted == x);
  }
}

TEST_CASE("skew_adjust handles negative-valued columns") {
  Rng rng = make_rng(88);
  std::exponential_distribution<double> expo(1.0);
  Vector x(500);
  for (Index i = 0; i < 500; ++i) x[i] = expo(rng) - 10.0;  // min near -10
  auto [adjusted, shift] = skew_adjust(x);
  REQUIRE(shift.has_value());
  CHECK(*shift > -x.minCoeff());  // x + c stays positive
  CHECK(adjusted.allFinite());
  CHECK(std::abs(skewness(adjusted)) < 0.1);
}

TEST_CASE("standardize closed forms and moments") {
  Vector a(2);
  a << -1.0, 1.0;
  auto [out, mean, scale] = standardize(a);
  CHECK(out[0] == -1.0);
  CHECK(out[1] == 1.0);
  CHECK(mean == 0.0);
  CHECK(scale == 1.0);

  Vector b(2);
  b << 0.0, 2.0;
  auto [out2, mean2, scale2] = standardize(b);
  CHECK(out2[0] == -1.0);
  CHECK(out2[1] == 1.0);
  CHECK(mean2 == 1.0);
  CHECK(scale2 == 1.0);

  Rng rng = make_rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    Vector x = 3.0 * fpctest::random_matrix(150, 1, rng).col(0);
    x.array() += 7.0;
    auto [z, m, s] = standardize(x);
    CHECK(std::abs(z.mean()) < 1e-12);
    CHECK(std::abs(z.squaredNorm() / z.size() - 1.0) < 1e-12);
    CHECK(s > 0.0);
  }

  CHECK_THROWS_AS(standardize(Vector::Zero(5)), DegenerateColumn);
}

TEST_CASE("preprocess_design drops constants and records transforms") {
  Rng rng = make_rng(111);
  std::exponential_distribution<double> expo(1.0);
  const Index n = 300;
  Matrix X(n, 4);
  X.col(0) = fpctest::random_matrix(n, 1, rng).col(0);       // roughly symmetric
  for (Index i = 0; i < n; ++i) X(i, 1) = expo(rng);          // right-skewed
  X.col(2).setConstant(5.0);                                  // constant: dropped
  for (Index i = 0; i < n; ++i) X(i, 3) = (i % 3 == 0) ? 1.0 : 0.0;  // binary

  PreprocessRecord rec;
  const Matrix Z = preprocess_design(X, rec);

  CHECK(Z.cols() == 3);
  REQUIRE(rec.kept.size() == 3);
  CHECK(rec.kept[0] == 0);
  CHECK(rec.kept[1] == 1);
  CHECK(rec.kept[2] == 3);
  CHECK(rec.columns[2].dropped);
  CHECK_FALSE(rec.columns[1].dropped);
  CHECK(rec.columns[1].transform_applied);
  CHECK(rec.columns[1].shift.has_value());
  CHECK(std::abs(rec.columns[1].skew_after) < std::abs(rec.columns[1].skew_before));
  CHECK_FALSE(rec.columns[3].transform_applied);

  for (Index j = 0; j < Z.cols(); ++j) {
    CHECK(std::abs(Z.col(j).mean()) < 1e-12);
    CHECK(std::abs(Z.col(j).squaredNorm() / n - 1.0) < 1e-12);
  }
  for (const auto& c : rec.columns)
    if (!c.dropped) CHECK(c.scale > 0.0);
}

TEST_CASE("preprocess identity record") {
  const PreprocessRecord rec = PreprocessRecord::identity(4);
  CHECK(rec.columns.size() == 4);
  CHECK(rec.kept.size() == 4);
  for (Index j = 0; j < 4; ++j) {
    CHECK(rec.kept[j] == j);
    CHECK_FALSE(rec.columns[j].transform_applied);
    CHECK(rec.columns[j].scale == 1.0);
  }
}

TEST_CASE("pca scores are orthogonal and variance-ordered") {
  Rng rng = make_rng(222);
  Matrix X = fpctest::random_matrix(20, 5, rng);
  for (Index j = 0; j < 5; ++j) X.col(j).array() -= X.col(j).mean();

  const PcaResult res = orthogonalize_pca(X);
  CHECK(res.rank == 5);
  CHECK_FALSE(res.rank_deficient);
  const Matrix G = res.scores.transpose() * res.scores;
  for (Index a = 0; a < 5; ++a)
    for (Index b = 0; b < 5; ++b)
      if (a != b) CHECK(std::abs(G(a, b)) < 1e-8 * std::sqrt(G(a, a) * G(b, b)));
  for (Index a = 1; a < 5; ++a) CHECK(G(a, a) <= G(a - 1, a - 1) + 1e-10);

  // Scores reproduce X through the loadings.
  CHECK((res.scores * res.loadings.transpose() - X).norm() < 1e-10);
}

TEST_CASE("pca on a wide matrix returns n components matching the Gram spectrum") {
  Rng rng = make_rng(333);
  Matrix X = fpctest::random_matrix(10, 30, rng);
  for (Index j = 0; j < 30; ++j) X.col(j).array() -= X.col(j).mean();

  const PcaResult res = orthogonalize_pca(X);
  CHECK(res.rank <= 10);
  CHECK(res.scores.cols() == res.rank);

  Eigen::SelfAdjointEigenSolver<Matrix> es(X * X.transpose());
  Vector ev = es.eigenvalues().reverse();  // descending
  for (Index k = 0; k < res.rank; ++k)
    CHECK(res.scores.col(k).squaredNorm() == doctest::Approx(ev[k]).epsilon(1e-8));
}

TEST_CASE("pca flags rank deficiency") {
  Rng rng = make_rng(444);
  Matrix X(12, 4);
  X.col(0) = fpctest::random_matrix(12, 1, rng).col(0);
  X.col(1) = fpctest::random_matrix(12, 1, rng).col(0);
  X.col(2) = X.col(0) + X.col(1);
  X.col(3) = 2.0 * X.col(0) - X.col(1);
  for (Index j = 0; j < 4; ++j) X.col(j).array() -= X.col(j).mean();

  const PcaResult res = orthogonalize_pca(X);
  CHECK(res.rank == 2);
  CHECK(res.rank_deficient);
}
