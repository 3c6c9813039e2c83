#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace gmc {

using Index = std::ptrdiff_t;
using Complex = std::complex<double>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealVector = Vec<double>;
using ComplexVector = Vec<Complex>;

enum class Field { real, complex };

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

template <class Scalar>
constexpr Field field_of() {
  return is_complex_v<Scalar> ? Field::complex : Field::real;
}

/// Thrown when vector lengths do not match operator dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when parameters violate a precondition (negative threshold,
/// gamma out of range, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for every iterative method that gave up before meeting its tolerance.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Carries the best iterate/estimate reached before giving up.
template <class Best>
class ConvergenceError : public ConvergenceFailure {
 public:
  ConvergenceError(const std::string& what, int iterations, Best best)
      : ConvergenceFailure(what, iterations), best_(std::move(best)) {}
  const Best& best() const noexcept { return best_; }

 private:
  Best best_;
};

// Sup-norm and l1-norm over moduli; both fields.
template <class Derived>
double sup_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <class Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().sum();
}

}  // namespace gmc
