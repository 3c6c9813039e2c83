#pragma once

#include "gmc/types.hpp"

namespace gmc {

/// Parameters of the scalar cost f(x) = 1/2 (y - a x)^2 + lam * phi_b(x).
struct ScalarPenaltyParams {
  double b = 0.0;
  double lam = 1.0;
  double a = 1.0;

  void validate() const;
};

/// Firm threshold parameters, mu > lam > 0.
struct FirmParams {
  double lam = 1.0;
  double mu = 2.0;

  void validate() const;
};

/// Soft threshold. |y| <= lam maps to zero.
double soft(double y, double lam);

/// Complex soft threshold: shrinks the modulus, keeps the phase.
Complex soft(const Complex& y, double lam);

/// Huber function: x^2/2 for |x| <= 1, |x| - 1/2 beyond.
double huber(double x);

/// min{ x^2/2, |x - 1| + 1/2, |x + 1| + 1/2 }.
double huber_via_min3(double x);

/// s_b(x) = s(b^2 x) / b^2, with s_0 = 0. Only b^2 enters.
double scaled_huber(double x, double b);

/// Scaled minimax-concave penalty phi_b(x) = |x| - s_b(x).
double scaled_mc(double x, double b);

/// True iff b^2 <= a^2 / lam, i.e. f above is convex.
bool scalar_convexity_holds(const ScalarPenaltyParams& params);

double firm(double y, const FirmParams& params);

/// Global minimiser of f(x) = 1/2 (y - a x)^2 + lam * phi_b(x) under the
/// convexity condition: firm(y/a; lam/a^2, 1/b^2). At equality
/// (b^2 = a^2/lam) the firm threshold degenerates to hard thresholding,
/// which is returned.
double scalar_minimize(double y, const ScalarPenaltyParams& params);

}  // namespace gmc
