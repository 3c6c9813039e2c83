#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gmc/multivariate_penalties.hpp"

namespace gmc {

struct SolveConfig {
  double lam = 1.0;
  /// Non-convexity, 0 <= gamma < 1. gamma = 0 gives the l1 norm.
  double gamma = 0.0;
  /// Step size; defaults to 1.9 / rho.
  std::optional<double> mu;
  /// ||A^H A||_2 if already known; estimated by power iteration otherwise.
  std::optional<double> gram_norm;
  int max_iter = 10000;
  /// Stop once both iterates move by at most tol in sup-norm.
  double tol = 1e-9;
  /// Record F(x) at every iterate (one inner solve per iteration).
  bool record_cost = false;

  void validate() const;
};

template <class Scalar>
struct SaddleState {
  Vec<Scalar> x;
  Vec<Scalar> v;
  int iter = 0;
  double delta = 0.0;
};

template <class Scalar>
struct SolveReport {
  Vec<Scalar> x_star;
  Vec<Scalar> v_star;
  int iterations = 0;
  bool converged = false;
  double delta = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  /// F(x^(0)), F(x^(1)), ... when record_cost is set.
  std::vector<double> cost_trace;
};

/// Called after every iteration with the new iterates.
template <class Scalar>
using IterationObserver = std::function<void(const SaddleState<Scalar>&)>;

/// Forward-backward iteration for the saddle point of
///   F(x, v) = 1/2||y - Ax||^2 + lam||x||_1 - lam||v||_1 - gamma/2 ||A(x - v)||^2,
/// whose x-component minimises 1/2||y - Ax||^2 + lam psi_B(x) with
/// B = sqrt(gamma/lam) A. Starts from x = v = 0. Hitting max_iter is not an
/// error: the report carries converged = false.
template <class Scalar>
SolveReport<Scalar> gmc_solve(const LinearOperator<Scalar>& a_op, const Vec<Scalar>& y,
                              const SolveConfig& cfg, const IterationObserver<Scalar>& observe = {});

/// Plain ISTA for 1/2||y - Ax||^2 + lam||x||_1. Uses lam from the argument;
/// cfg.lam and cfg.gamma are ignored. With the same step it reproduces
/// gmc_solve at gamma = 0 bit for bit.
template <class Scalar>
SolveReport<Scalar> ista_solve(const LinearOperator<Scalar>& a_op, const Vec<Scalar>& y,
                               double lam, const SolveConfig& cfg,
                               const IterationObserver<Scalar>& observe = {});

/// Closed-form minimiser when A^T A = diag(alphas^2): per-coordinate firm
/// thresholding of aty_n / alpha_n^2 with thresholds lam/alpha_n^2 and
/// lam/(gamma alpha_n^2); soft thresholding when gamma = 0. gamma = 1 is
/// the hard-threshold limit.
RealVector diagonal_solve(const RealVector& alphas, const RealVector& aty, double lam,
                          double gamma);

/// F(x) = 1/2||y - Ax||^2 + lam psi_B(x) with B = sqrt(gamma/lam) A.
template <class Scalar>
double cost_value(const LinearOperator<Scalar>& a_op, const Vec<Scalar>& y, double lam,
                  double gamma, const Vec<Scalar>& x);

/// Same cost with an explicit penalty (any B, convex or not).
template <class Scalar>
double cost_value(const LinearOperator<Scalar>& a_op, const Vec<Scalar>& y, double lam,
                  const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x);

/// Re-fits the coefficients with |x_n| > support_tol by unregularised least
/// squares on the restricted columns (normal equations); the rest stay 0.
template <class Scalar>
Vec<Scalar> debias_least_squares(const LinearOperator<Scalar>& a_op, const Vec<Scalar>& y,
                                 const Vec<Scalar>& x, double support_tol = 1e-8);

/// Non-owning handle so that a borrowed operator can be wrapped by
/// ScaledOperator / GmcPenalty for the duration of a call.
template <class Scalar>
OperatorPtr<Scalar> borrow(const LinearOperator<Scalar>& op) {
  return OperatorPtr<Scalar>(OperatorPtr<Scalar>{}, &op);
}

}  // namespace gmc
