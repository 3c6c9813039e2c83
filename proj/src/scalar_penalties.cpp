#include "gmc/scalar_penalties.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmc {

void ScalarPenaltyParams::validate() const {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw ParameterError("lam must be positive");
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("a and b must be finite");
}

void FirmParams::validate() const {
  if (!(lam > 0.0)) throw ParameterError("firm: lam must be positive");
  if (!(mu > lam)) throw ParameterError("firm: mu must exceed lam");
}

double soft(double y, double lam) {
  if (lam < 0.0) throw ParameterError("soft: negative threshold");
  const double m = std::abs(y);
  if (m <= lam) return 0.0;
  return std::copysign(m - lam, y);
}

Complex soft(const Complex& y, double lam) {
  if (lam < 0.0) throw ParameterError("soft: negative threshold");
  const double m = std::abs(y);
  if (m <= lam) return Complex(0.0, 0.0);
  return (1.0 - lam / m) * y;
}

double huber(double x) {
  const double m = std::abs(x);
  return m <= 1.0 ? 0.5 * x * x : m - 0.5;
}

double huber_via_min3(double x) {
  return std::min({0.5 * x * x, std::abs(x - 1.0) + 0.5, std::abs(x + 1.0) + 0.5});
}

double scaled_huber(double x, double b) {
  const double b2 = b * b;
  if (b2 == 0.0) return 0.0;
  const double m = std::abs(x);
  return m <= 1.0 / b2 ? 0.5 * b2 * x * x : m - 0.5 / b2;
}

double scaled_mc(double x, double b) { return std::abs(x) - scaled_huber(x, b); }

bool scalar_convexity_holds(const ScalarPenaltyParams& p) {
  p.validate();
  return p.b * p.b <= p.a * p.a / p.lam;
}

double firm(double y, const FirmParams& p) {
  p.validate();
  const double m = std::abs(y);
  if (m <= p.lam) return 0.0;
  if (m >= p.mu) return y;
  return std::copysign(p.mu * (m - p.lam) / (p.mu - p.lam), y);
}

double scalar_minimize(double y, const ScalarPenaltyParams& p) {
  p.validate();
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw ParameterError("scalar_minimize: requires a > 0 and b > 0");
  if (!scalar_convexity_holds(p))
    throw ParameterError("scalar_minimize: b^2 > a^2/lam, cost is not convex");
  const double z = y / p.a;
  const double lam = p.lam / (p.a * p.a);
  const double mu = 1.0 / (p.b * p.b);
  if (mu > lam) return firm(z, {lam, mu});
  return std::abs(z) <= lam ? 0.0 : z;
}

}  // namespace gmc
