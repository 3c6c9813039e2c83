#pragma once

// Data-parallel inner loops behind the concrete operators.
//
// Every kernel exists twice: an OpenMP version used by the operators and a
// plain serial version kept as the reference. Each output element is
// accumulated by exactly one thread in the same order as the serial loop,
// so the two produce bit-identical results for any thread count.

#include <span>

#include "gmc/types.hpp"

namespace gmc::kernels {

/// Below this many multiply-adds the parallel kernels stay on one thread.
inline constexpr Index kParallelWork = 1 << 14;

// Row-major dense matrix `a` of shape rows x cols.
template <class Scalar>
void gemv(std::span<const Scalar> a, Index rows, Index cols, std::span<const Scalar> x,
          std::span<Scalar> y);

// y <- conj(a)^T x
template <class Scalar>
void gemv_adjoint(std::span<const Scalar> a, Index rows, Index cols,
                  std::span<const Scalar> x, std::span<Scalar> y);

/// Over-sampled inverse DFT: y[m] = scale * sum_n x[n] * twiddle[(m*n) mod N],
/// with twiddle[k] = exp(j 2 pi k / N) and N = twiddle.size() = x.size().
void dft_synthesis(std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> x, std::span<Complex> y);

/// Adjoint of dft_synthesis: x[n] = scale * sum_m y[m] * conj(twiddle[(m*n) mod N]).
void dft_analysis(std::span<const Complex> twiddle, double scale,
                  std::span<const Complex> y, std::span<Complex> x);

/// Geometry of a short-time Fourier frame. Frame k starts at sample
/// first_start + k * hop and covers segment_len samples; samples outside
/// [0, signal_len) are treated as zero.
struct StftGeometry {
  Index signal_len = 0;
  Index segment_len = 0;
  Index hop = 0;
  Index frames = 0;
  Index first_start = 0;
};

/// Synthesis (inverse STFT, overlap-add). coef holds frames x segment_len
/// values, frame-major. twiddle has segment_len entries exp(j 2 pi k / R).
/// Power-of-two segment lengths use a radix-2 FFT per frame, others a
/// direct DFT.
void stft_synthesis(const StftGeometry& g, std::span<const double> window,
                    std::span<const Complex> twiddle, double scale,
                    std::span<const Complex> coef, std::span<Complex> signal);

/// Analysis (forward STFT), the adjoint of stft_synthesis.
void stft_analysis(const StftGeometry& g, std::span<const double> window,
                   std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> signal, std::span<Complex> coef);

namespace serial {

template <class Scalar>
void gemv(std::span<const Scalar> a, Index rows, Index cols, std::span<const Scalar> x,
          std::span<Scalar> y);

template <class Scalar>
void gemv_adjoint(std::span<const Scalar> a, Index rows, Index cols,
                  std::span<const Scalar> x, std::span<Scalar> y);

void dft_synthesis(std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> x, std::span<Complex> y);
void dft_analysis(std::span<const Complex> twiddle, double scale,
                  std::span<const Complex> y, std::span<Complex> x);
void stft_synthesis(const StftGeometry& g, std::span<const double> window,
                    std::span<const Complex> twiddle, double scale,
                    std::span<const Complex> coef, std::span<Complex> signal);
void stft_analysis(const StftGeometry& g, std::span<const double> window,
                   std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> signal, std::span<Complex> coef);

}  // namespace serial

}  // namespace gmc::kernels
