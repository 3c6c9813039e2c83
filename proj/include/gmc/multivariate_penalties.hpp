#pragma once

#include "gmc/operators.hpp"

namespace gmc {

/// The matrix B that defines the generalized Huber function
///   S_B(x) = min_v { ||v||_1 + 1/2 ||B (x - v)||_2^2 }
/// and the GMC penalty psi_B(x) = ||x||_1 - S_B(x), plus the settings of
/// the inner solver used to evaluate them.
template <class Scalar>
class GmcPenalty {
 public:
  explicit GmcPenalty(OperatorPtr<Scalar> b_op, double inner_tol = 1e-10,
                      int inner_max_iter = 100000);

  const LinearOperator<Scalar>& b() const { return *b_op_; }
  const OperatorPtr<Scalar>& b_ptr() const { return b_op_; }
  Index dim() const { return b_op_->cols(); }
  double inner_tol() const { return inner_tol_; }
  int inner_max_iter() const { return inner_max_iter_; }
  /// ||B^H B||_2, estimated once at construction.
  double gram_norm() const { return gram_norm_; }

  /// B^H B x
  Vec<Scalar> gram(const Vec<Scalar>& x) const { return b_op_->adjoint(b_op_->forward(x)); }

 private:
  OperatorPtr<Scalar> b_op_;
  double inner_tol_;
  int inner_max_iter_;
  double gram_norm_;
};

template <class Scalar>
struct InnerSolution {
  Vec<Scalar> v_star;
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Evaluates S_B(x) by iterative shrinkage on the inner problem, with
/// step 1/||B^H B||_2 and v = 0 as the starting point. Stops once the
/// sup-norm change of v is at most inner_tol; otherwise throws
/// ConvergenceError<InnerSolution<Scalar>> with the last iterate.
template <class Scalar>
InnerSolution<Scalar> eval_generalized_huber(const GmcPenalty<Scalar>& pen,
                                             const Vec<Scalar>& x);

/// grad S_B(x) = B^H B (x - v*), the envelope gradient of the inner problem.
template <class Scalar>
Vec<Scalar> grad_generalized_huber(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x);

/// psi_B(x) = ||x||_1 - S_B(x)
template <class Scalar>
double eval_gmc(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x);

/// True iff ||B^H B x||_inf <= 1, where S_B(x) = 1/2 ||B x||^2.
template <class Scalar>
bool in_quadratic_region(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x);

/// B = sqrt(gamma / lam) A, which keeps 1/2||y - Ax||^2 + lam psi_B(x)
/// convex for 0 <= gamma <= 1.
template <class Scalar>
GmcPenalty<Scalar> build_b_from_a(OperatorPtr<Scalar> a_op, double lam, double gamma,
                                  double inner_tol = 1e-10, int inner_max_iter = 100000);

}  // namespace gmc
