#include "gmc/kernels.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace gmc::kernels {
namespace {

// Plain multiply-accumulate. Written out by hand for complex values so the
// compiler does not route through the NaN-recovering library multiply.
inline void mac(double& acc, double a, double b) { acc += a * b; }

inline void mac(Complex& acc, const Complex& a, const Complex& b) {
  acc = Complex(acc.real() + (a.real() * b.real() - a.imag() * b.imag()),
                acc.imag() + (a.real() * b.imag() + a.imag() * b.real()));
}

inline double conj_of(double a) { return a; }
inline Complex conj_of(const Complex& a) { return std::conj(a); }

template <class Scalar>
inline Scalar gemv_row(const Scalar* a, Index cols, const Scalar* x) {
  Scalar acc{0};
  for (Index n = 0; n < cols; ++n) mac(acc, a[n], x[n]);
  return acc;
}

template <class Scalar>
inline Scalar gemv_adjoint_col(const Scalar* a, Index rows, Index cols, Index n,
                               const Scalar* x) {
  Scalar acc{0};
  for (Index m = 0; m < rows; ++m) mac(acc, conj_of(a[m * cols + n]), x[m]);
  return acc;
}

inline Complex dft_synthesis_row(const Complex* tw, Index big_n, double scale, const Complex* x,
                                 Index m) {
  Complex acc{0.0, 0.0};
  Index k = 0;
  const Index step = m % big_n;
  for (Index n = 0; n < big_n; ++n) {
    mac(acc, x[n], tw[k]);
    k += step;
    if (k >= big_n) k -= big_n;
  }
  return acc * scale;
}

inline Complex dft_analysis_col(const Complex* tw, Index big_n, double scale, const Complex* y,
                                Index rows, Index n) {
  Complex acc{0.0, 0.0};
  Index k = 0;
  const Index step = n % big_n;
  for (Index m = 0; m < rows; ++m) {
    mac(acc, y[m], std::conj(tw[k]));
    k += step;
    if (k >= big_n) k -= big_n;
  }
  return acc * scale;
}

inline Complex cmul(const Complex& a, const Complex& b) {
  return Complex(a.real() * b.real() - a.imag() * b.imag(),
                 a.real() * b.imag() + a.imag() * b.real());
}

inline bool is_pow2(Index r) { return r > 0 && (r & (r - 1)) == 0; }

// In-place radix-2 transform, data[f] <- sum_n data[n] * w^(f n) with
// w = twiddle[1] (or its conjugate). r must be a power of two.
inline void fft_inplace(Complex* data, Index r, const Complex* tw, bool conjugate) {
  for (Index i = 1, j = 0; i < r; ++i) {
    Index bit = r >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (Index len = 2; len <= r; len <<= 1) {
    const Index half = len / 2;
    const Index stride = r / len;
    for (Index i = 0; i < r; i += len) {
      for (Index j = 0; j < half; ++j) {
        const Complex w = conjugate ? std::conj(tw[j * stride]) : tw[j * stride];
        const Complex u = data[i + j];
        const Complex t = cmul(w, data[i + j + half]);
        data[i + j] = u + t;
        data[i + j + half] = u - t;
      }
    }
  }
}

// Inverse DFT of one frame's coefficients, without window or scale.
inline void stft_segment(const Complex* tw, Index r, const Complex* c, Complex* seg) {
  if (is_pow2(r)) {
    std::copy(c, c + r, seg);
    fft_inplace(seg, r, tw, false);
    return;
  }
  for (Index n = 0; n < r; ++n) {
    Complex acc{0.0, 0.0};
    Index k = 0;
    for (Index f = 0; f < r; ++f) {
      mac(acc, c[f], tw[k]);
      k += n;
      if (k >= r) k -= r;
    }
    seg[n] = acc;
  }
}

inline Complex stft_gather(const StftGeometry& g, const double* w, double scale,
                           const Complex* segments, Index t) {
  // Frames k with start_k <= t < start_k + R, visited in increasing k.
  const Index rel = t - g.first_start;
  Index k_hi = rel / g.hop;
  if (k_hi >= g.frames) k_hi = g.frames - 1;
  Index k_lo = (rel - g.segment_len) / g.hop + 1;
  if (rel - g.segment_len < 0) k_lo = 0;
  if (k_lo < 0) k_lo = 0;
  Complex acc{0.0, 0.0};
  for (Index k = k_lo; k <= k_hi; ++k) {
    const Index n = rel - k * g.hop;
    if (n < 0 || n >= g.segment_len) continue;
    acc += w[n] * segments[k * g.segment_len + n];
  }
  return acc * scale;
}

inline void stft_analysis_frame(const StftGeometry& g, const double* w, const Complex* tw,
                                double scale, const Complex* signal, Index k, Complex* out) {
  const Index r = g.segment_len;
  const Index start = g.first_start + k * g.hop;
  if (is_pow2(r)) {
    for (Index n = 0; n < r; ++n) {
      const Index t = start + n;
      out[n] = (t >= 0 && t < g.signal_len) ? w[n] * signal[t] : Complex{0.0, 0.0};
    }
    fft_inplace(out, r, tw, true);
    for (Index f = 0; f < r; ++f) out[f] *= scale;
    return;
  }
  for (Index f = 0; f < r; ++f) {
    Complex acc{0.0, 0.0};
    Index idx = 0;
    for (Index n = 0; n < r; ++n) {
      const Index t = start + n;
      if (t >= 0 && t < g.signal_len) mac(acc, w[n] * signal[t], std::conj(tw[idx]));
      idx += f;
      if (idx >= r) idx -= r;
    }
    out[f] = acc * scale;
  }
}

}  // namespace

template <class Scalar>
void gemv(std::span<const Scalar> a, Index rows, Index cols, std::span<const Scalar> x,
          std::span<Scalar> y) {
  const Scalar* ap = a.data();
  const Scalar* xp = x.data();
  Scalar* yp = y.data();
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelWork)
  for (Index m = 0; m < rows; ++m) yp[m] = gemv_row(ap + m * cols, cols, xp);
}

template <class Scalar>
void gemv_adjoint(std::span<const Scalar> a, Index rows, Index cols,
                  std::span<const Scalar> x, std::span<Scalar> y) {
  const Scalar* ap = a.data();
  const Scalar* xp = x.data();
  Scalar* yp = y.data();
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelWork)
  for (Index n = 0; n < cols; ++n) yp[n] = gemv_adjoint_col(ap, rows, cols, n, xp);
}

void dft_synthesis(std::span<const Complex> twiddle, double scale, std::span<const Complex> x,
                   std::span<Complex> y) {
  const auto big_n = static_cast<Index>(twiddle.size());
  const auto rows = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static) if (rows * big_n >= kParallelWork)
  for (Index m = 0; m < rows; ++m)
    y[m] = dft_synthesis_row(twiddle.data(), big_n, scale, x.data(), m);
}

void dft_analysis(std::span<const Complex> twiddle, double scale, std::span<const Complex> y,
                  std::span<Complex> x) {
  const auto big_n = static_cast<Index>(twiddle.size());
  const auto rows = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static) if (rows * big_n >= kParallelWork)
  for (Index n = 0; n < big_n; ++n)
    x[n] = dft_analysis_col(twiddle.data(), big_n, scale, y.data(), rows, n);
}

void stft_synthesis(const StftGeometry& g, std::span<const double> window,
                    std::span<const Complex> twiddle, double scale,
                    std::span<const Complex> coef, std::span<Complex> signal) {
  std::vector<Complex> segments(static_cast<std::size_t>(g.frames * g.segment_len));
  const bool par = g.frames * g.segment_len * g.segment_len >= kParallelWork;
#pragma omp parallel if (par)
  {
#pragma omp for schedule(static)
    for (Index k = 0; k < g.frames; ++k)
      stft_segment(twiddle.data(), g.segment_len, coef.data() + k * g.segment_len,
                   segments.data() + k * g.segment_len);
#pragma omp for schedule(static)
    for (Index t = 0; t < g.signal_len; ++t)
      signal[t] = stft_gather(g, window.data(), scale, segments.data(), t);
  }
}

void stft_analysis(const StftGeometry& g, std::span<const double> window,
                   std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> signal, std::span<Complex> coef) {
  const bool par = g.frames * g.segment_len * g.segment_len >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (Index k = 0; k < g.frames; ++k)
    stft_analysis_frame(g, window.data(), twiddle.data(), scale, signal.data(), k,
                        coef.data() + k * g.segment_len);
}

namespace serial {

template <class Scalar>
void gemv(std::span<const Scalar> a, Index rows, Index cols, std::span<const Scalar> x,
          std::span<Scalar> y) {
  for (Index m = 0; m < rows; ++m) y[m] = gemv_row(a.data() + m * cols, cols, x.data());
}

template <class Scalar>
void gemv_adjoint(std::span<const Scalar> a, Index rows, Index cols,
                  std::span<const Scalar> x, std::span<Scalar> y) {
  for (Index n = 0; n < cols; ++n) y[n] = gemv_adjoint_col(a.data(), rows, cols, n, x.data());
}

void dft_synthesis(std::span<const Complex> twiddle, double scale, std::span<const Complex> x,
                   std::span<Complex> y) {
  const auto big_n = static_cast<Index>(twiddle.size());
  for (Index m = 0; m < static_cast<Index>(y.size()); ++m)
    y[m] = dft_synthesis_row(twiddle.data(), big_n, scale, x.data(), m);
}

void dft_analysis(std::span<const Complex> twiddle, double scale, std::span<const Complex> y,
                  std::span<Complex> x) {
  const auto big_n = static_cast<Index>(twiddle.size());
  const auto rows = static_cast<Index>(y.size());
  for (Index n = 0; n < big_n; ++n)
    x[n] = dft_analysis_col(twiddle.data(), big_n, scale, y.data(), rows, n);
}

void stft_synthesis(const StftGeometry& g, std::span<const double> window,
                    std::span<const Complex> twiddle, double scale,
                    std::span<const Complex> coef, std::span<Complex> signal) {
  std::vector<Complex> segments(static_cast<std::size_t>(g.frames * g.segment_len));
  for (Index k = 0; k < g.frames; ++k)
    stft_segment(twiddle.data(), g.segment_len, coef.data() + k * g.segment_len,
                 segments.data() + k * g.segment_len);
  for (Index t = 0; t < g.signal_len; ++t)
    signal[t] = stft_gather(g, window.data(), scale, segments.data(), t);
}

void stft_analysis(const StftGeometry& g, std::span<const double> window,
                   std::span<const Complex> twiddle, double scale,
                   std::span<const Complex> signal, std::span<Complex> coef) {
  for (Index k = 0; k < g.frames; ++k)
    stft_analysis_frame(g, window.data(), twiddle.data(), scale, signal.data(), k,
                        coef.data() + k * g.segment_len);
}

template void gemv<double>(std::span<const double>, Index, Index, std::span<const double>,
                           std::span<double>);
template void gemv<Complex>(std::span<const Complex>, Index, Index, std::span<const Complex>,
                            std::span<Complex>);
template void gemv_adjoint<double>(std::span<const double>, Index, Index,
                                   std::span<const double>, std::span<double>);
template void gemv_adjoint<Complex>(std::span<const Complex>, Index, Index,
                                    std::span<const Complex>, std::span<Complex>);

}  // namespace serial

template void gemv<double>(std::span<const double>, Index, Index, std::span<const double>,
                           std::span<double>);
template void gemv<Complex>(std::span<const Complex>, Index, Index, std::span<const Complex>,
                            std::span<Complex>);
template void gemv_adjoint<double>(std::span<const double>, Index, Index,
                                   std::span<const double>, std::span<double>);
template void gemv_adjoint<Complex>(std::span<const Complex>, Index, Index,
                                    std::span<const Complex>, std::span<Complex>);

}  // namespace gmc::kernels
