#include "gmc/multivariate_penalties.hpp"

#include <cmath>

#include "gmc/scalar_penalties.hpp"

namespace gmc {

template <class Scalar>
GmcPenalty<Scalar>::GmcPenalty(OperatorPtr<Scalar> b_op, double inner_tol, int inner_max_iter)
    : b_op_(std::move(b_op)), inner_tol_(inner_tol), inner_max_iter_(inner_max_iter) {
  if (!b_op_) throw ParameterError("GmcPenalty: null operator");
  if (!(inner_tol_ > 0.0)) throw ParameterError("GmcPenalty: inner_tol must be positive");
  if (inner_max_iter_ < 1) throw ParameterError("GmcPenalty: inner_max_iter must be >= 1");
  gram_norm_ = estimate_gram_norm(*b_op_, 1e-12, 100000);
}

template <class Scalar>
InnerSolution<Scalar> eval_generalized_huber(const GmcPenalty<Scalar>& pen,
                                             const Vec<Scalar>& x) {
  const auto& b = pen.b();
  if (x.size() != pen.dim())
    throw DimensionError("eval_generalized_huber: x has wrong length");

  InnerSolution<Scalar> sol;
  sol.v_star = Vec<Scalar>::Zero(x.size());
  if (pen.gram_norm() == 0.0) return sol;  // B = 0: S_B = 0 at v = 0

  const double step = 1.0 / pen.gram_norm();
  Vec<Scalar>& v = sol.v_star;
  Vec<Scalar> r(b.rows());
  Vec<Scalar> g(x.size());
  Vec<Scalar> diff(x.size());
  for (int it = 1; it <= pen.inner_max_iter(); ++it) {
    diff = v - x;
    b.forward_into(diff, r);
    b.adjoint_into(r, g);
    double change = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      const Scalar next = soft(v[i] - step * g[i], step);
      change = std::max(change, std::abs(next - v[i]));
      v[i] = next;
    }
    sol.iterations = it;
    sol.residual = change;
    if (change <= pen.inner_tol()) break;
  }

  diff = x - v;
  b.forward_into(diff, r);
  sol.value = l1_norm(v) + 0.5 * r.squaredNorm();
  if (sol.residual > pen.inner_tol())
    throw ConvergenceError<InnerSolution<Scalar>>(
        "eval_generalized_huber: inner solver did not converge", sol.iterations, sol);
  return sol;
}

template <class Scalar>
Vec<Scalar> grad_generalized_huber(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x) {
  const auto sol = eval_generalized_huber(pen, x);
  return pen.gram(x - sol.v_star);
}

template <class Scalar>
double eval_gmc(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x) {
  return l1_norm(x) - eval_generalized_huber(pen, x).value;
}

template <class Scalar>
bool in_quadratic_region(const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x) {
  if (x.size() != pen.dim()) throw DimensionError("in_quadratic_region: x has wrong length");
  return sup_norm(pen.gram(x)) <= 1.0;
}

template <class Scalar>
GmcPenalty<Scalar> build_b_from_a(OperatorPtr<Scalar> a_op, double lam, double gamma,
                                  double inner_tol, int inner_max_iter) {
  if (!(lam > 0.0)) throw ParameterError("build_b_from_a: lam must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ParameterError("build_b_from_a: gamma must lie in [0, 1]");
  auto b = std::make_shared<ScaledOperator<Scalar>>(std::move(a_op), std::sqrt(gamma / lam));
  return GmcPenalty<Scalar>(std::move(b), inner_tol, inner_max_iter);
}

#define GMC_INSTANTIATE(S)                                                                  \
  template class GmcPenalty<S>;                                                             \
  template InnerSolution<S> eval_generalized_huber<S>(const GmcPenalty<S>&, const Vec<S>&); \
  template Vec<S> grad_generalized_huber<S>(const GmcPenalty<S>&, const Vec<S>&);           \
  template double eval_gmc<S>(const GmcPenalty<S>&, const Vec<S>&);                         \
  template bool in_quadratic_region<S>(const GmcPenalty<S>&, const Vec<S>&);                \
  template GmcPenalty<S> build_b_from_a<S>(OperatorPtr<S>, double, double, double, int);

GMC_INSTANTIATE(double)
GMC_INSTANTIATE(Complex)

#undef GMC_INSTANTIATE

}  // namespace gmc
