#pragma once

// Test-only brute-force references. Nothing here calls into the solvers or
// penalty evaluators it is used to check.

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "gmc/types.hpp"

namespace gmc::oracle {

/// argmin of f over [lo, hi] on a uniform grid of spacing step.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best_x = lo;
  double best_f = std::numeric_limits<double>::infinity();
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

inline double grid_min(const std::function<double(double)>& f, double lo, double hi,
                       double step) {
  return f(grid_argmin(f, lo, hi, step));
}

/// Largest eigenvalue of A^H A from a dense self-adjoint eigensolve.
template <class Matrix>
double gram_eigmax(const Matrix& a) {
  using Scalar = typename Matrix::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> g = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<decltype(g)> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// S_B(x) for N = 1 or 2 by grid search over v_0 in [-R, R],
/// R = ||x||_inf + 2, on the lattice step * Z (so v_0 = 0 is a grid point).
/// In 2-D the second coordinate is minimised exactly for each grid v_0:
/// the cost is |v_1| plus a quadratic in v_1, solved by a soft threshold.
inline double generalized_huber_grid(const Eigen::MatrixXd& b, const RealVector& x,
                                     double step) {
  const double r = x.cwiseAbs().maxCoeff() + 2.0;
  const Eigen::MatrixXd g = b.transpose() * b;
  const long n = static_cast<long>(std::floor(r / step));
  double best = std::numeric_limits<double>::infinity();
  RealVector v = RealVector::Zero(x.size());
  for (long i = -n; i <= n; ++i) {
    v[0] = static_cast<double>(i) * step;
    if (x.size() == 2) {
      const double c = g(1, 1) * x[1] + g(1, 0) * (x[0] - v[0]);
      const double shrunk = std::abs(c) <= 1.0 ? 0.0 : std::copysign(std::abs(c) - 1.0, c);
      v[1] = g(1, 1) > 0.0 ? shrunk / g(1, 1) : 0.0;
    }
    const RealVector d = x - v;
    best = std::min(best, v.cwiseAbs().sum() + 0.5 * d.dot(g * d));
  }
  return best;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Index rows, Index cols,
                                     double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = nd(gen);
  return m;
}

inline RealVector random_vector(std::mt19937_64& gen, Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = nd(gen);
  return v;
}

inline ComplexVector random_complex_vector(std::mt19937_64& gen, Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(nd(gen), nd(gen));
  return v;
}

/// Worst violation of the fixed-point conditions of the saddle iteration at
/// (x, v), computed from the dense matrix:
///   g = A^H(Ax - y) - gamma A^H A(x - v),  h = gamma A^H A(v - x),
/// with |g_n| <= lam where x_n = 0 and g_n = -lam x_n/|x_n| elsewhere (same
/// for h against v).
template <class Matrix, class Vector>
double saddle_inclusion_residual(const Matrix& a, const Vector& y, double lam, double gamma,
                                 const Vector& x, const Vector& v) {
  const Matrix gram = a.adjoint() * a;
  const Vector g = a.adjoint() * (a * x - y) - gamma * (gram * (x - v));
  const Vector h = gamma * (gram * (v - x));
  auto block = [lam](const Vector& grad, const Vector& z) {
    double worst = 0.0;
    for (Index n = 0; n < z.size(); ++n) {
      if (std::abs(z[n]) == 0.0)
        worst = std::max(worst, std::abs(grad[n]) - lam);
      else
        worst = std::max(worst, std::abs(grad[n] + lam * (z[n] / std::abs(z[n]))));
    }
    return worst;
  };
  return std::max(block(g, x), block(h, v));
}

}  // namespace gmc::oracle
