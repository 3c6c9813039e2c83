#include "gmc/operators.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gmc/csv.hpp"
#include "gmc/noise.hpp"

namespace gmc {

template <class Scalar>
DenseOperator<Scalar>::DenseOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0)
    throw DimensionError("DenseOperator: empty matrix");
}

template <class Scalar>
DenseOperator<Scalar> DenseOperator<Scalar>::identity(Index n) {
  return DenseOperator(Matrix::Identity(n, n));
}

template <class Scalar>
DenseOperator<Scalar> DenseOperator<Scalar>::diagonal(const Vec<Scalar>& d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  m.diagonal() = d;
  return DenseOperator(std::move(m));
}

template <class Scalar>
void DenseOperator<Scalar>::do_forward(std::span<const Scalar> x, std::span<Scalar> y) const {
  kernels::gemv<Scalar>({entries_.data(), static_cast<std::size_t>(entries_.size())},
                        entries_.rows(), entries_.cols(), x, y);
}

template <class Scalar>
void DenseOperator<Scalar>::do_adjoint(std::span<const Scalar> y, std::span<Scalar> x) const {
  kernels::gemv_adjoint<Scalar>({entries_.data(), static_cast<std::size_t>(entries_.size())},
                                entries_.rows(), entries_.cols(), y, x);
}

template <class Scalar>
ScaledOperator<Scalar>::ScaledOperator(OperatorPtr<Scalar> base, double scale)
    : base_(std::move(base)), scale_(scale) {
  if (!base_) throw ParameterError("ScaledOperator: null base operator");
  if (!std::isfinite(scale_)) throw ParameterError("ScaledOperator: non-finite scale");
}

template <class Scalar>
void ScaledOperator<Scalar>::do_forward(std::span<const Scalar> x, std::span<Scalar> y) const {
  if (scale_ == 0.0) {
    std::fill(y.begin(), y.end(), Scalar{0});
    return;
  }
  Vec<Scalar> in = Eigen::Map<const Vec<Scalar>>(x.data(), static_cast<Index>(x.size()));
  Vec<Scalar> out(base_->rows());
  base_->forward_into(in, out);
  for (Index i = 0; i < out.size(); ++i) y[i] = scale_ * out[i];
}

template <class Scalar>
void ScaledOperator<Scalar>::do_adjoint(std::span<const Scalar> y, std::span<Scalar> x) const {
  if (scale_ == 0.0) {
    std::fill(x.begin(), x.end(), Scalar{0});
    return;
  }
  Vec<Scalar> in = Eigen::Map<const Vec<Scalar>>(y.data(), static_cast<Index>(y.size()));
  Vec<Scalar> out(base_->cols());
  base_->adjoint_into(in, out);
  for (Index i = 0; i < out.size(); ++i) x[i] = scale_ * out[i];
}

DftFrameOperator::DftFrameOperator(Index signal_len, Index coef_len) : signal_len_(signal_len) {
  if (signal_len <= 0 || coef_len < signal_len)
    throw DimensionError("DftFrameOperator: need 0 < M <= N");
  twiddle_.resize(static_cast<std::size_t>(coef_len));
  for (Index k = 0; k < coef_len; ++k) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(coef_len);
    twiddle_[k] = Complex(std::cos(phase), std::sin(phase));
  }
}

void DftFrameOperator::do_forward(std::span<const Complex> x, std::span<Complex> y) const {
  kernels::dft_synthesis(twiddle_, 1.0 / std::sqrt(static_cast<double>(twiddle_.size())), x, y);
}

void DftFrameOperator::do_adjoint(std::span<const Complex> y, std::span<Complex> x) const {
  kernels::dft_analysis(twiddle_, 1.0 / std::sqrt(static_cast<double>(twiddle_.size())), y, x);
}

StftFrameOperator::StftFrameOperator(Index signal_len, Index segment_len) {
  if (signal_len <= 0) throw DimensionError("StftFrameOperator: empty signal");
  if (segment_len < 4 || segment_len % 4 != 0)
    throw ParameterError("StftFrameOperator: segment length must be a positive multiple of 4");
  auto& g = geometry_;
  g.signal_len = signal_len;
  g.segment_len = segment_len;
  g.hop = segment_len / 4;
  // Every sample is covered by exactly four frames, including the edges.
  g.first_start = -(segment_len - g.hop);
  g.frames = (signal_len - 1 - g.first_start) / g.hop + 1;

  window_.resize(static_cast<std::size_t>(segment_len));
  twiddle_.resize(static_cast<std::size_t>(segment_len));
  for (Index n = 0; n < segment_len; ++n) {
    const double t = std::numbers::pi * static_cast<double>(n) / static_cast<double>(segment_len);
    window_[n] = std::sin(t);  // sqrt of the periodic Hann window
    twiddle_[n] = Complex(std::cos(2.0 * t), std::sin(2.0 * t));
  }
  // sum_k w^2(t - k hop) = 2 at 75% overlap; each synthesis/analysis pair
  // also picks up a factor R from the DFT.
  scale_ = 1.0 / std::sqrt(2.0 * static_cast<double>(segment_len));
}

void StftFrameOperator::do_forward(std::span<const Complex> x, std::span<Complex> y) const {
  kernels::stft_synthesis(geometry_, window_, twiddle_, scale_, x, y);
}

void StftFrameOperator::do_adjoint(std::span<const Complex> y, std::span<Complex> x) const {
  kernels::stft_analysis(geometry_, window_, twiddle_, scale_, y, x);
}

template <class Scalar>
double estimate_gram_norm(const LinearOperator<Scalar>& op, double tol, int max_iter) {
  if (!(tol > 0.0)) throw ParameterError("estimate_gram_norm: tol must be positive");
  const Index n = op.cols();
  constexpr std::uint64_t kStartKey = 0x5EEDULL;
  Vec<Scalar> x(n);
  for (Index i = 0; i < n; ++i) {
    if constexpr (is_complex_v<Scalar>)
      x[i] = Scalar(rng::gaussian(kStartKey, 2 * i), rng::gaussian(kStartKey, 2 * i + 1));
    else
      x[i] = rng::gaussian(kStartKey, i);
  }
  x /= x.norm();

  Vec<Scalar> ax(op.rows());
  Vec<Scalar> z(n);
  double estimate = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    op.forward_into(x, ax);
    op.adjoint_into(ax, z);
    const double next = std::real(x.dot(z));  // x has unit norm
    const double znorm = z.norm();
    if (znorm == 0.0) return 0.0;
    x = z / znorm;
    if (it > 1 && std::abs(next - estimate) <= tol * std::abs(next)) return next;
    estimate = next;
  }
  throw ConvergenceError<double>("estimate_gram_norm: power iteration did not converge",
                                 max_iter, estimate);
}

DenseOperator<double>::Matrix read_dense_csv(std::istream& in) {
  const auto rows = csv::read_numeric(in);
  if (rows.empty()) throw DimensionError("dense csv: no rows");
  const auto cols = rows.front().size();
  DenseOperator<double>::Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("dense csv: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return m;
}

DenseOperator<double>::Matrix read_dense_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dense_csv(in);
}

template class DenseOperator<double>;
template class DenseOperator<Complex>;
template class ScaledOperator<double>;
template class ScaledOperator<Complex>;
template double estimate_gram_norm<double>(const LinearOperator<double>&, double, int);
template double estimate_gram_norm<Complex>(const LinearOperator<Complex>&, double, int);

}  // namespace gmc
