#include <doctest.h>

#include <cmath>
#include <random>

#include "gmc/scalar_penalties.hpp"
#include "oracles.hpp"

using namespace gmc;
using doctest::Approx;

namespace {

// argmin over complex v of lam|v| + 1/2|y - v|^2 on a square grid.
Complex complex_soft_oracle(Complex y, double lam, double step) {
  const double r = std::abs(y) + 1.0;
  const long n = static_cast<long>(r / step);
  Complex best = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (long i = -n; i <= n; ++i)
    for (long j = -n; j <= n; ++j) {
      const Complex v(i * step, j * step);
      const double f = lam * std::abs(v) + 0.5 * std::norm(y - v);
      if (f < best_f) {
        best_f = f;
        best = v;
      }
    }
  return best;
}

}  // namespace

TEST_CASE("soft threshold") {
  CHECK(soft(3.0, 1.0) == 2.0);
  CHECK(soft(-3.0, 1.0) == -2.0);
  CHECK(soft(0.5, 1.0) == 0.0);
  CHECK(soft(1.0, 1.0) == 0.0);  // closed dead zone
  CHECK_THROWS_AS(soft(1.0, -0.1), ParameterError);

  CHECK(soft(Complex(4.0, 3.0), 5.0) == Complex(0.0, 0.0));
  const Complex shrunk = soft(Complex(6.0, 8.0), 5.0);
  CHECK(std::abs(shrunk - Complex(3.0, 4.0)) < 1e-15);
  // Same values from a 2-D grid search of the proximal objective.
  CHECK(std::abs(complex_soft_oracle(Complex(6.0, 8.0), 5.0, 0.01) - Complex(3.0, 4.0)) < 0.011);
  CHECK(std::abs(complex_soft_oracle(Complex(4.0, 3.0), 5.0, 0.01)) < 0.011);
  const Complex y(-1.7, 0.9);
  CHECK(std::abs(complex_soft_oracle(y, 0.6, 0.005) - soft(y, 0.6)) < 0.006);
  CHECK_THROWS_AS(soft(Complex(1.0, 0.0), -1.0), ParameterError);
}

TEST_CASE("huber and its min-of-three form") {
  CHECK(huber(0.0) == 0.0);
  CHECK(huber(0.5) == 0.125);
  CHECK(huber(-2.0) == 1.5);
  CHECK(huber_via_min3(0.5) == 0.125);
  CHECK(huber_via_min3(2.0) == 1.5);
  CHECK(huber_via_min3(-3.0) == 2.5);
  for (int i = 0; i <= 10000; ++i) {
    const double x = -5.0 + 10.0 * i / 10000.0;
    REQUIRE(huber(x) == huber_via_min3(x));
  }
}

TEST_CASE("scaled huber and scaled MC") {
  CHECK(scaled_huber(0.1, 2.0) == Approx(0.02).epsilon(1e-14));
  CHECK(scaled_huber(1.0, 2.0) == 0.875);
  CHECK(scaled_huber(7.0, 0.0) == 0.0);
  CHECK(scaled_huber(1.0, -2.0) == scaled_huber(1.0, 2.0));

  CHECK(scaled_mc(3.0, 0.0) == 3.0);
  CHECK(scaled_mc(1.0, 2.0) == 0.125);
  CHECK(scaled_mc(-5.0, 1.0) == 0.5);

  for (double b : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    for (int i = 0; i <= 2000; ++i) {
      const double x = -5.0 + 10.0 * i / 2000.0;
      const double s = scaled_huber(x, b);
      CHECK(s >= 0.0);
      CHECK(s <= std::abs(x));
      CHECK(scaled_mc(x, b) + s == std::abs(x));
    }
  }
}

TEST_CASE("scaled huber limits in b") {
  for (int i = 0; i <= 200; ++i) {
    const double x = -5.0 + 10.0 * i / 200.0;
    if (std::abs(x) >= 0.1) CHECK(std::abs(scaled_huber(x, 1e3) - std::abs(x)) <= 1e-5);
    CHECK(scaled_huber(x, 1e-4) <= 0.5e-8 * 25.0 + 1e-18);
  }
}

TEST_CASE("scaled huber is the infimal convolution |.| with b^2/2 (.)^2") {
  for (double b : {0.5, 1.0, 2.0}) {
    for (double x : {-3.0, -0.8, -0.1, 0.0, 0.05, 0.3, 1.0, 2.7}) {
      const double inf_conv = oracle::grid_min(
          [&](double v) { return std::abs(v) + 0.5 * b * b * (x - v) * (x - v); }, -5.0, 5.0, 1e-4);
      CHECK(std::abs(scaled_huber(x, b) - inf_conv) <= 1e-7);
    }
  }
}

TEST_CASE("scalar convexity condition") {
  CHECK(scalar_convexity_holds({.b = 1.0, .lam = 1.0, .a = 1.0}));
  CHECK_FALSE(scalar_convexity_holds({.b = 1.01, .lam = 1.0, .a = 1.0}));
  CHECK(scalar_convexity_holds({.b = 1.4, .lam = 2.0, .a = 2.0}));
  CHECK_THROWS_AS(scalar_convexity_holds({.b = 1.0, .lam = 0.0, .a = 1.0}), ParameterError);
}

TEST_CASE("firm threshold") {
  const FirmParams p{1.0, 2.0};
  CHECK(firm(0.5, p) == 0.0);
  CHECK(firm(1.5, p) == 1.0);
  CHECK(firm(-1.5, p) == -1.0);
  CHECK(firm(3.0, p) == 3.0);
  CHECK_THROWS_AS(firm(1.0, {1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(firm(1.0, {0.0, 1.0}), ParameterError);

  // Continuous and non-decreasing.
  double prev = firm(-4.0, p);
  for (int i = 1; i <= 8000; ++i) {
    const double y = -4.0 + 8.0 * i / 8000.0;
    const double f = firm(y, p);
    CHECK(f >= prev);
    CHECK(f - prev <= 2.0 * (8.0 / 8000.0) + 1e-12);  // slope at most mu/(mu-lam)
    prev = f;
  }
}

TEST_CASE("firm threshold limits") {
  for (int i = 0; i <= 1000; ++i) {
    const double y = -5.0 + 10.0 * i / 1000.0;
    CHECK(std::abs(firm(y, {1.0, 1e6}) - soft(y, 1.0)) <= 1e-5);
    if (std::abs(std::abs(y) - 1.0) > 1e-6) {
      const double hard = std::abs(y) <= 1.0 ? 0.0 : y;
      CHECK(std::abs(firm(y, {1.0, 1.0 + 1e-9}) - hard) <= 1e-9);
    }
  }
}

TEST_CASE("scalar_minimize examples") {
  CHECK(scalar_minimize(0.5, {.b = 1.0, .lam = 1.0, .a = 1.0}) == 0.0);
  CHECK(scalar_minimize(10.0, {.b = 1.0, .lam = 1.0, .a = 1.0}) == 10.0);

  const ScalarPenaltyParams p{.b = 0.9, .lam = 1.0, .a = 1.0};
  const double grid = oracle::grid_argmin(
      [&](double x) { return 0.5 * (1.3 - x) * (1.3 - x) + scaled_mc(x, 0.9); }, -3.0, 3.0, 1e-5);
  CHECK(std::abs(scalar_minimize(1.3, p) - grid) <= 1e-5);

  CHECK_THROWS_AS(scalar_minimize(1.0, {.b = 1.5, .lam = 1.0, .a = 1.0}), ParameterError);
  CHECK_THROWS_AS(scalar_minimize(1.0, {.b = 0.0, .lam = 1.0, .a = 1.0}), ParameterError);
  CHECK_THROWS_AS(scalar_minimize(1.0, {.b = 0.5, .lam = 1.0, .a = -1.0}), ParameterError);
}

TEST_CASE("scalar_minimize agrees with grid search on random convex instances") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> uy(-2.5, 2.5), ua(0.5, 2.0), ul(0.1, 2.0), uu(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const double y = uy(gen), a = ua(gen), lam = ul(gen);
    const double b = std::sqrt(uu(gen) * a * a / lam);
    const ScalarPenaltyParams p{.b = b, .lam = lam, .a = a};
    const double got = scalar_minimize(y, p);
    const double want = oracle::grid_argmin(
        [&](double x) { return 0.5 * (y - a * x) * (y - a * x) + lam * scaled_mc(x, b); }, -6.0,
        6.0, 1e-5);
    CHECK(std::abs(got - want) <= 1e-5);
  }
}
