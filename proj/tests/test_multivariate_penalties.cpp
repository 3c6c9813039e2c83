#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "gmc/multivariate_penalties.hpp"
#include "gmc/scalar_penalties.hpp"
#include "oracles.hpp"

using namespace gmc;

namespace {

using Dense = DenseOperator<double>;

GmcPenalty<double> penalty(const Eigen::MatrixXd& b, double tol = 1e-12) {
  return GmcPenalty<double>(std::make_shared<Dense>(b), tol, 1000000);
}

Eigen::MatrixXd gram_sqrt(const Eigen::MatrixXd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.transpose() * b);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

struct Draw {
  Eigen::MatrixXd b;
  RealVector x;
};

Draw random_draw(std::mt19937_64& gen, int max_n = 6) {
  std::uniform_int_distribution<int> dim(1, max_n);
  const int n = dim(gen);
  const int m = dim(gen);
  return {oracle::random_matrix(gen, m, n), oracle::random_vector(gen, n, 2.0)};
}

}  // namespace

TEST_CASE("eval_generalized_huber examples") {
  std::mt19937_64 gen(41);
  SUBCASE("B = 0") {
    const auto pen = penalty(Eigen::MatrixXd::Zero(3, 4));
    const auto sol = eval_generalized_huber(pen, oracle::random_vector(gen, 4, 3.0));
    CHECK(sol.value == 0.0);
    CHECK(sol.v_star.isZero());
  }
  SUBCASE("scalar B reduces to the scaled Huber function") {
    for (double b : {0.5, 1.0, 2.0}) {
      const auto pen = penalty(Eigen::MatrixXd::Constant(1, 1, b));
      for (int i = 0; i <= 60; ++i) {
        const double x = -3.0 + 0.1 * i;
        CHECK(std::abs(eval_generalized_huber(pen, RealVector(RealVector::Constant(1, x))).value -
                       scaled_huber(x, b)) <= 1e-9);
      }
    }
  }
  SUBCASE("diagonal B^T B separates into scalar Huber functions") {
    // Rotated so that B itself is not diagonal; only B^T B = diag(1, 4) matters.
    const double c = std::cos(0.3), s = std::sin(0.3);
    Eigen::MatrixXd q(2, 2);
    q << c, -s, s, c;
    const Eigen::MatrixXd b = q * Eigen::Vector2d(1.0, 2.0).asDiagonal();
    const auto pen = penalty(b);
    for (int t = 0; t < 50; ++t) {
      const RealVector x = oracle::random_vector(gen, 2, 2.0);
      CHECK(std::abs(eval_generalized_huber(pen, x).value -
                     (scaled_huber(x[0], 1.0) + scaled_huber(x[1], 2.0))) <= 1e-9);
    }
  }
}

TEST_CASE("grad_generalized_huber examples") {
  std::mt19937_64 gen(42);
  const Eigen::MatrixXd b = oracle::random_matrix(gen, 2, 2);
  const auto pen = penalty(b);
  CHECK(grad_generalized_huber(pen, RealVector(RealVector::Zero(2))).isZero());

  // Inside the quadratic region v* = 0 and the gradient is B^T B x.
  RealVector x = oracle::random_vector(gen, 2);
  x /= (b.transpose() * b * x).cwiseAbs().maxCoeff() * 1.25;
  REQUIRE(in_quadratic_region(pen, x));
  CHECK((grad_generalized_huber(pen, x) - b.transpose() * b * x).cwiseAbs().maxCoeff() < 1e-12);

  const RealVector g = grad_generalized_huber(pen, RealVector{{10.0, -10.0}});
  CHECK(g.cwiseAbs().maxCoeff() <= 1.0 + 1e-8);
}

TEST_CASE("eval_gmc examples") {
  std::mt19937_64 gen(43);
  const RealVector x = oracle::random_vector(gen, 3, 2.0);
  CHECK(eval_gmc(penalty(Eigen::MatrixXd::Zero(2, 3)), x) == l1_norm(x));

  const auto diag = penalty(Eigen::Vector2d(0.7, 1.6).asDiagonal().toDenseMatrix());
  for (int t = 0; t < 20; ++t) {
    const RealVector z = oracle::random_vector(gen, 2, 2.0);
    CHECK(std::abs(eval_gmc(diag, z) - (scaled_mc(z[0], 0.7) + scaled_mc(z[1], 1.6))) <= 1e-9);
  }

  const Eigen::MatrixXd b = oracle::random_matrix(gen, 3, 3);
  const auto pen = penalty(b);
  RealVector q = oracle::random_vector(gen, 3);
  q /= (b.transpose() * b * q).cwiseAbs().maxCoeff() * 2.0;
  REQUIRE(in_quadratic_region(pen, q));
  CHECK(std::abs(eval_gmc(pen, q) - (l1_norm(q) - 0.5 * (b * q).squaredNorm())) <= 1e-12);
}

TEST_CASE("in_quadratic_region examples") {
  const auto id = penalty(Eigen::MatrixXd::Identity(2, 2));
  CHECK(in_quadratic_region(id, RealVector(RealVector::Zero(2))));
  CHECK(in_quadratic_region(id, RealVector{{0.5, -0.9}}));
  CHECK_FALSE(in_quadratic_region(id, RealVector{{1.5, 0.0}}));
  CHECK_THROWS_AS(in_quadratic_region(id, RealVector(RealVector::Zero(3))), DimensionError);
}

TEST_CASE("build_b_from_a") {
  auto a = std::make_shared<Dense>(Dense::identity(2));
  std::mt19937_64 gen(44);
  const RealVector x = oracle::random_vector(gen, 2, 3.0);

  const auto zero = build_b_from_a<double>(a, 1.0, 0.0);
  CHECK(zero.gram_norm() == 0.0);
  CHECK(eval_gmc(zero, x) == l1_norm(x));

  const auto full = build_b_from_a<double>(a, 1.0, 1.0);
  CHECK(full.b().forward(x) == a->forward(x));

  auto dense = std::make_shared<Dense>(oracle::random_matrix(gen, 3, 2));
  const auto scaled = build_b_from_a<double>(dense, 2.0, 0.8);
  CHECK((scaled.b().forward(x) - std::sqrt(0.4) * dense->forward(x)).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(build_b_from_a<double>(a, 1.0, 1.2), ParameterError);
  CHECK_THROWS_AS(build_b_from_a<double>(a, 1.0, -0.1), ParameterError);
  CHECK_THROWS_AS(build_b_from_a<double>(a, 0.0, 0.5), ParameterError);
}

TEST_CASE("inner solver failure carries the best iterate") {
  const auto pen = GmcPenalty<double>(std::make_shared<Dense>(Eigen::MatrixXd::Identity(2, 2)), 1e-12, 1);
  try {
    eval_generalized_huber(pen, RealVector{{5.0, -4.0}});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError<InnerSolution<double>>& e) {
    CHECK(e.best().iterations == 1);
    CHECK(e.best().v_star.size() == 2);
    CHECK(e.best().residual > 1e-12);
  }
  CHECK_THROWS_AS(eval_generalized_huber(pen, RealVector(RealVector::Zero(3))), DimensionError);
  CHECK_THROWS_AS(GmcPenalty<double>(std::make_shared<Dense>(Dense::identity(2)), 0.0), ParameterError);
}

TEST_CASE("sandwich bounds and convexity on random draws") {
  std::mt19937_64 gen(45);
  for (int t = 0; t < 200; ++t) {
    const auto [b, x] = random_draw(gen);
    const auto pen = penalty(b);
    const double s = eval_generalized_huber(pen, x).value;
    const double l1 = l1_norm(x);
    CHECK(s >= -1e-12);
    CHECK(s <= l1 + 1e-12);
    const double psi = eval_gmc(pen, x);
    CHECK(psi >= -1e-12);
    CHECK(psi <= l1 + 1e-12);

    const RealVector z = oracle::random_vector(gen, x.size(), 2.0);
    const double mid = eval_generalized_huber(pen, RealVector(0.5 * (x + z))).value;
    CHECK(mid <= 0.5 * (s + eval_generalized_huber(pen, z).value) + 1e-8);
  }
}

TEST_CASE("dependence on B only through B^T B, and the scalar upper envelope") {
  std::mt19937_64 gen(46);
  for (int t = 0; t < 100; ++t) {
    const auto [b, x] = random_draw(gen);
    const auto pen_b = penalty(b);
    const auto pen_c = penalty(gram_sqrt(b));
    const double sb = eval_generalized_huber(pen_b, x).value;
    CHECK(std::abs(sb - eval_generalized_huber(pen_c, x).value) <= 1e-6);

    const double alpha = std::sqrt(oracle::gram_eigmax(b));
    double envelope = 0.0;
    for (Index i = 0; i < x.size(); ++i) envelope += scaled_huber(x[i], alpha);
    CHECK(sb <= envelope + 1e-6);
  }
}

TEST_CASE("gradient: finite differences, sup-norm bound and quadrant monotonicity") {
  std::mt19937_64 gen(47);
  const double h = 1e-6;
  for (int t = 0; t < 100; ++t) {
    const auto [b, x] = random_draw(gen);
    const auto pen = penalty(b, 1e-14);
    const RealVector g = grad_generalized_huber(pen, x);
    CHECK(g.cwiseAbs().maxCoeff() <= 1.0 + 1e-8);
    for (Index i = 0; i < x.size(); ++i) {
      RealVector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (eval_generalized_huber(pen, xp).value - eval_generalized_huber(pen, xm).value) / (2 * h);
      CHECK(std::abs(fd - g[i]) <= 1e-5);
      // grad psi_B = sign(x) - grad S_B keeps the sign of x or vanishes.
      const double sign = x[i] > 0 ? 1.0 : -1.0;
      CHECK(sign * (sign - g[i]) >= -1e-8);
    }
  }
}

TEST_CASE("quadratic region equality on random draws") {
  std::mt19937_64 gen(48);
  int hits = 0;
  for (int t = 0; t < 200; ++t) {
    auto [b, x] = random_draw(gen);
    x *= 0.2;
    const auto pen = penalty(b);
    if (!in_quadratic_region(pen, x)) continue;
    ++hits;
    CHECK(std::abs(eval_generalized_huber(pen, x).value - 0.5 * (b * x).squaredNorm()) <= 1e-6);
  }
  CHECK(hits >= 50);
}

TEST_CASE("inner solver agrees with a grid-search oracle for N <= 2") {
  std::mt19937_64 gen(49);
  for (int t = 0; t < 100; ++t) {
    const auto [b, x] = random_draw(gen, 2);
    const double want = oracle::generalized_huber_grid(b, x, 1e-3);
    CHECK(std::abs(eval_generalized_huber(penalty(b), x).value - want) <= 1e-3);
  }
}

TEST_CASE("complex field: modulus l1 and rotation invariance") {
  const double b = 1.5;
  Eigen::Matrix<Complex, -1, -1, Eigen::RowMajor> bm = Eigen::MatrixXcd::Identity(3, 3) * b;
  const GmcPenalty<Complex> pen(std::make_shared<DenseOperator<Complex>>(bm), 1e-12);
  std::mt19937_64 gen(50);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector z = oracle::random_complex_vector(gen, 3);
    double want = 0.0;
    for (Index i = 0; i < 3; ++i) want += scaled_huber(std::abs(z[i]), b);
    CHECK(std::abs(eval_generalized_huber(pen, z).value - want) <= 1e-9);
    const double psi = eval_gmc(pen, z);
    CHECK(psi >= -1e-12);
    CHECK(psi <= l1_norm(z) + 1e-12);
  }
}
