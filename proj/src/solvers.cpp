#include "gmc/solvers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gmc/scalar_penalties.hpp"

namespace gmc {

void SolveConfig::validate() const {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw ParameterError("lambda must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw ParameterError("gamma must lie in [0, 1); gamma = 1 breaks the step-size bound");
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (mu && !(*mu > 0.0)) throw ParameterError("mu must be positive");
  if (gram_norm && !(*gram_norm >= 0.0)) throw ParameterError("gram_norm must be >= 0");
}

namespace {

template <class Scalar>
double resolve_gram_norm(const LinearOperator<Scalar>& a, const SolveConfig& cfg) {
  return cfg.gram_norm ? *cfg.gram_norm : estimate_gram_norm(a, 1e-12, 100000);
}

// mu in (0, 2/rho); defaults to 1.9/rho.
double resolve_step(double rho, const SolveConfig& cfg) {
  if (!(rho > 0.0)) throw ParameterError("operator has zero norm");
  const double mu = cfg.mu ? *cfg.mu : 1.9 / rho;
  if (!(mu > 0.0 && mu < 2.0 / rho))
    throw ParameterError("step size mu must lie in (0, 2/rho)");
  return mu;
}

template <class Scalar>
void check_dims(const LinearOperator<Scalar>& a, const Vec<Scalar>& y) {
  if (y.size() != a.rows()) throw DimensionError("y length does not match operator rows");
}

}  // namespace

template <class Scalar>
SolveReport<Scalar> gmc_solve(const LinearOperator<Scalar>& a, const Vec<Scalar>& y,
                              const SolveConfig& cfg, const IterationObserver<Scalar>& observe) {
  cfg.validate();
  check_dims(a, y);
  const double gamma = cfg.gamma;
  const double gram = resolve_gram_norm(a, cfg);

  SolveReport<Scalar> rep;
  rep.rho = std::max(1.0, gamma / (1.0 - gamma)) * gram;
  rep.mu = resolve_step(rep.rho, cfg);
  const double mu = rep.mu;
  const double thresh = mu * cfg.lam;

  const Index n = a.cols();
  SaddleState<Scalar> st{Vec<Scalar>::Zero(n), Vec<Scalar>::Zero(n), 0, 0.0};
  Vec<Scalar> ax(a.rows()), av(a.rows()), r(a.rows()), d(a.rows());
  Vec<Scalar> gx(n), gv(n);

  std::optional<GmcPenalty<Scalar>> pen;
  if (cfg.record_cost) {
    pen.emplace(build_b_from_a(borrow(a), cfg.lam, gamma));
    rep.cost_trace.push_back(cost_value(a, y, cfg.lam, *pen, st.x));
  }

  for (int it = 1; it <= cfg.max_iter; ++it) {
    a.forward_into(st.x, ax);
    a.forward_into(st.v, av);
    for (Index m = 0; m < r.size(); ++m) {
      d[m] = av[m] - ax[m];
      r[m] = (ax[m] + gamma * d[m]) - y[m];
    }
    a.adjoint_into(r, gx);
    a.adjoint_into(d, gv);

    double delta = 0.0;
    for (Index i = 0; i < n; ++i) {
      const Scalar w = st.x[i] - mu * gx[i];
      const Scalar u = st.v[i] - (mu * gamma) * gv[i];
      const Scalar x_next = soft(w, thresh);
      const Scalar v_next = soft(u, thresh);
      delta = std::max({delta, std::abs(x_next - st.x[i]), std::abs(v_next - st.v[i])});
      st.x[i] = x_next;
      st.v[i] = v_next;
    }
    st.iter = it;
    st.delta = delta;
    if (pen) rep.cost_trace.push_back(cost_value(a, y, cfg.lam, *pen, st.x));
    if (observe) observe(st);
    if (delta <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }

  rep.x_star = std::move(st.x);
  rep.v_star = std::move(st.v);
  rep.iterations = st.iter;
  rep.delta = st.delta;
  return rep;
}

template <class Scalar>
SolveReport<Scalar> ista_solve(const LinearOperator<Scalar>& a, const Vec<Scalar>& y,
                               double lam, const SolveConfig& cfg,
                               const IterationObserver<Scalar>& observe) {
  SolveConfig c = cfg;
  c.lam = lam;
  c.gamma = 0.0;
  c.validate();
  check_dims(a, y);

  SolveReport<Scalar> rep;
  rep.rho = resolve_gram_norm(a, c);
  rep.mu = resolve_step(rep.rho, c);
  const double mu = rep.mu;
  const double thresh = mu * lam;

  const Index n = a.cols();
  SaddleState<Scalar> st{Vec<Scalar>::Zero(n), Vec<Scalar>::Zero(n), 0, 0.0};
  Vec<Scalar> ax(a.rows()), r(a.rows()), g(n);
  auto l1_cost = [&](const Vec<Scalar>& x) {
    return 0.5 * (y - a.forward(x)).squaredNorm() + lam * l1_norm(x);
  };
  if (c.record_cost) rep.cost_trace.push_back(l1_cost(st.x));

  for (int it = 1; it <= c.max_iter; ++it) {
    a.forward_into(st.x, ax);
    for (Index m = 0; m < r.size(); ++m) r[m] = ax[m] - y[m];
    a.adjoint_into(r, g);
    double delta = 0.0;
    for (Index i = 0; i < n; ++i) {
      const Scalar x_next = soft(st.x[i] - mu * g[i], thresh);
      delta = std::max(delta, std::abs(x_next - st.x[i]));
      st.x[i] = x_next;
    }
    st.iter = it;
    st.delta = delta;
    if (c.record_cost) rep.cost_trace.push_back(l1_cost(st.x));
    if (observe) observe(st);
    if (delta <= c.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.x_star = std::move(st.x);
  rep.v_star = std::move(st.v);
  rep.iterations = st.iter;
  rep.delta = st.delta;
  return rep;
}

RealVector diagonal_solve(const RealVector& alphas, const RealVector& aty, double lam,
                          double gamma) {
  if (alphas.size() != aty.size()) throw DimensionError("diagonal_solve: length mismatch");
  if (!(lam > 0.0)) throw ParameterError("diagonal_solve: lam must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ParameterError("diagonal_solve: gamma must lie in [0, 1]");
  RealVector x(aty.size());
  for (Index i = 0; i < aty.size(); ++i) {
    const double a2 = alphas[i] * alphas[i];
    if (!(alphas[i] > 0.0)) throw ParameterError("diagonal_solve: alphas must be positive");
    const double z = aty[i] / a2;
    const double t = lam / a2;
    if (gamma == 0.0) {
      x[i] = soft(z, t);
    } else if (gamma == 1.0) {
      x[i] = std::abs(z) <= t ? 0.0 : z;
    } else {
      x[i] = firm(z, {t, lam / (gamma * a2)});
    }
  }
  return x;
}

template <class Scalar>
double cost_value(const LinearOperator<Scalar>& a, const Vec<Scalar>& y, double lam,
                  const GmcPenalty<Scalar>& pen, const Vec<Scalar>& x) {
  check_dims(a, y);
  return 0.5 * (y - a.forward(x)).squaredNorm() + lam * eval_gmc(pen, x);
}

template <class Scalar>
double cost_value(const LinearOperator<Scalar>& a, const Vec<Scalar>& y, double lam,
                  double gamma, const Vec<Scalar>& x) {
  const auto pen = build_b_from_a(borrow(a), lam, gamma);
  return cost_value(a, y, lam, pen, x);
}

template <class Scalar>
Vec<Scalar> debias_least_squares(const LinearOperator<Scalar>& a, const Vec<Scalar>& y,
                                 const Vec<Scalar>& x, double support_tol) {
  check_dims(a, y);
  if (x.size() != a.cols()) throw DimensionError("debias: x length does not match operator");
  std::vector<Index> support;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > support_tol) support.push_back(i);
  Vec<Scalar> out = Vec<Scalar>::Zero(x.size());
  if (support.empty()) return out;

  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto k = static_cast<Index>(support.size());
  Matrix cols(a.rows(), k);
  Vec<Scalar> e = Vec<Scalar>::Zero(a.cols());
  for (Index j = 0; j < k; ++j) {
    e[support[j]] = Scalar{1};
    cols.col(j) = a.forward(e);
    e[support[j]] = Scalar{0};
  }
  const Matrix normal = cols.adjoint() * cols;
  const Vec<Scalar> rhs = cols.adjoint() * y;
  Vec<Scalar> z;
  Eigen::LDLT<Matrix> ldlt(normal);
  if (k <= a.rows() && ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      (ldlt.vectorD().array().real() > 1e-12 * ldlt.vectorD().array().real().maxCoeff()).all()) {
    z = ldlt.solve(rhs);
  } else {
    // Rank-deficient support: minimum-norm solution of the normal equations.
    z = normal.completeOrthogonalDecomposition().solve(rhs);
  }
  for (Index j = 0; j < k; ++j) out[support[j]] = z[j];
  return out;
}

#define GMC_INSTANTIATE(S)                                                                    \
  template SolveReport<S> gmc_solve<S>(const LinearOperator<S>&, const Vec<S>&,               \
                                       const SolveConfig&, const IterationObserver<S>&);      \
  template SolveReport<S> ista_solve<S>(const LinearOperator<S>&, const Vec<S>&, double,      \
                                        const SolveConfig&, const IterationObserver<S>&);     \
  template double cost_value<S>(const LinearOperator<S>&, const Vec<S>&, double, double,      \
                                const Vec<S>&);                                               \
  template double cost_value<S>(const LinearOperator<S>&, const Vec<S>&, double,              \
                                const GmcPenalty<S>&, const Vec<S>&);                         \
  template Vec<S> debias_least_squares<S>(const LinearOperator<S>&, const Vec<S>&,            \
                                          const Vec<S>&, double);

GMC_INSTANTIATE(double)
GMC_INSTANTIATE(Complex)

#undef GMC_INSTANTIATE

}  // namespace gmc
