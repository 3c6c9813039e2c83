#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gmc/kernels.hpp"
#include "gmc/types.hpp"

namespace gmc {

/// Abstract linear map A: domain (length cols) -> codomain (length rows),
/// together with its adjoint (conjugate transpose for complex scalars).
///
/// Operators are immutable once built; forward/adjoint are pure and may be
/// called concurrently.
template <class Scalar>
class LinearOperator {
 public:
  using scalar_type = Scalar;
  using Vector = Vec<Scalar>;

  virtual ~LinearOperator() = default;

  /// Codomain dimension M.
  virtual Index rows() const = 0;
  /// Domain dimension N.
  virtual Index cols() const = 0;

  static constexpr Field field() { return field_of<Scalar>(); }

  Vector forward(const Vector& x) const {
    Vector y(rows());
    forward_into(x, y);
    return y;
  }

  Vector adjoint(const Vector& y) const {
    Vector x(cols());
    adjoint_into(y, x);
    return x;
  }

  /// Writes Ax into `out`, which must already have length rows().
  void forward_into(const Vector& x, Vector& out) const {
    check_length(x.size(), cols(), "forward: input");
    check_length(out.size(), rows(), "forward: output");
    do_forward({x.data(), static_cast<std::size_t>(x.size())},
               {out.data(), static_cast<std::size_t>(out.size())});
  }

  void adjoint_into(const Vector& y, Vector& out) const {
    check_length(y.size(), rows(), "adjoint: input");
    check_length(out.size(), cols(), "adjoint: output");
    do_adjoint({y.data(), static_cast<std::size_t>(y.size())},
               {out.data(), static_cast<std::size_t>(out.size())});
  }

 protected:
  virtual void do_forward(std::span<const Scalar> x, std::span<Scalar> y) const = 0;
  virtual void do_adjoint(std::span<const Scalar> y, std::span<Scalar> x) const = 0;

 private:
  static void check_length(Index got, Index want, const char* what) {
    if (got != want)
      throw DimensionError(std::string(what) + " has length " + std::to_string(got) +
                           ", expected " + std::to_string(want));
  }
};

template <class Scalar>
using OperatorPtr = std::shared_ptr<const LinearOperator<Scalar>>;

template <class Scalar>
Vec<Scalar> apply_forward(const LinearOperator<Scalar>& op, const Vec<Scalar>& x) {
  return op.forward(x);
}

template <class Scalar>
Vec<Scalar> apply_adjoint(const LinearOperator<Scalar>& op, const Vec<Scalar>& y) {
  return op.adjoint(y);
}

/// Explicit M x N matrix, stored row-major.
template <class Scalar>
class DenseOperator final : public LinearOperator<Scalar> {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit DenseOperator(Matrix entries);

  static DenseOperator identity(Index n);
  static DenseOperator diagonal(const Vec<Scalar>& d);

  Index rows() const override { return entries_.rows(); }
  Index cols() const override { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }

 protected:
  void do_forward(std::span<const Scalar> x, std::span<Scalar> y) const override;
  void do_adjoint(std::span<const Scalar> y, std::span<Scalar> x) const override;

 private:
  Matrix entries_;
};

/// scale * A for a wrapped operator A.
template <class Scalar>
class ScaledOperator final : public LinearOperator<Scalar> {
 public:
  ScaledOperator(OperatorPtr<Scalar> base, double scale);

  Index rows() const override { return base_->rows(); }
  Index cols() const override { return base_->cols(); }
  double scale() const { return scale_; }
  const LinearOperator<Scalar>& base() const { return *base_; }

 protected:
  void do_forward(std::span<const Scalar> x, std::span<Scalar> y) const override;
  void do_adjoint(std::span<const Scalar> y, std::span<Scalar> x) const override;

 private:
  OperatorPtr<Scalar> base_;
  double scale_;
};

/// Over-sampled inverse DFT, A[m,n] = exp(j 2 pi m n / N) / sqrt(N),
/// m < M <= N. Satisfies A A^H = I.
class DftFrameOperator final : public LinearOperator<Complex> {
 public:
  DftFrameOperator(Index signal_len, Index coef_len);

  Index rows() const override { return signal_len_; }
  Index cols() const override { return static_cast<Index>(twiddle_.size()); }

 protected:
  void do_forward(std::span<const Complex> x, std::span<Complex> y) const override;
  void do_adjoint(std::span<const Complex> y, std::span<Complex> x) const override;

 private:
  Index signal_len_;
  std::vector<Complex> twiddle_;
};

/// Inverse short-time Fourier transform as a synthesis frame: maps
/// frames x segment_len time-frequency coefficients (frame-major) to a
/// signal of length signal_len. Square-root periodic Hann window, hop
/// segment_len / 4, scaled so that A A^H = I.
class StftFrameOperator final : public LinearOperator<Complex> {
 public:
  StftFrameOperator(Index signal_len, Index segment_len = 64);

  Index rows() const override { return geometry_.signal_len; }
  Index cols() const override { return geometry_.frames * geometry_.segment_len; }

  Index frames() const { return geometry_.frames; }
  Index segment_len() const { return geometry_.segment_len; }
  Index hop() const { return geometry_.hop; }
  const kernels::StftGeometry& geometry() const { return geometry_; }

 protected:
  void do_forward(std::span<const Complex> x, std::span<Complex> y) const override;
  void do_adjoint(std::span<const Complex> y, std::span<Complex> x) const override;

 private:
  kernels::StftGeometry geometry_;
  std::vector<double> window_;
  std::vector<Complex> twiddle_;
  double scale_;
};

/// Largest eigenvalue of A^H A (= ||A||_2^2) by power iteration on
/// x -> A^H A x from a fixed pseudo-random start vector. Stops when the
/// Rayleigh quotient changes by at most tol relative. Throws
/// ConvergenceError<double> carrying the last estimate otherwise.
template <class Scalar>
double estimate_gram_norm(const LinearOperator<Scalar>& op, double tol = 1e-10,
                          int max_iter = 10000);

/// Reads a dense real matrix from CSV text, one row per line.
DenseOperator<double>::Matrix read_dense_csv(std::istream& in);
DenseOperator<double>::Matrix read_dense_csv_file(const std::string& path);

}  // namespace gmc
