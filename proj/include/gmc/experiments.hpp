#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmc/operators.hpp"
#include "gmc/solvers.hpp"

namespace gmc {

/// Sampled sequence. Real signals keep a zero imaginary part.
struct Signal {
  ComplexVector samples;
  bool complex_valued = false;

  Index size() const { return samples.size(); }
};

enum class Method { l1, l1_debiased, gmc };

inline constexpr Method kAllMethods[] = {Method::l1, Method::l1_debiased, Method::gmc};

std::string_view method_name(Method m);
/// Accepts "l1", "l1_debiased", "l1-debiased", "gmc".
std::optional<Method> parse_method(std::string_view name);

/// Iteration limits shared by the denoising runs.
struct SolverSettings {
  int max_iter = 20000;
  double tol = 1e-8;
};

/// Two-tone frequency-domain denoising study.
struct ExperimentSpec {
  Index signal_len = 100;
  Index coef_len = 256;
  double f1 = 0.1;
  double f2 = 0.22;
  double a1 = 2.0;
  double a2 = 1.0;
  double sigma = 1.0;
  int realizations = 20;
  std::vector<double> lambda_grid = lambda_range(0.5, 3.5, 0.25);
  double gamma = 0.8;
  std::uint64_t seed = 1;
  SolverSettings solver;

  void validate() const;

  /// lo, lo + step, ..., up to hi (inclusive, with rounding slack).
  static std::vector<double> lambda_range(double lo, double hi, double step);
};

/// g(m) = a1 cos(2 pi f1 m) + a2 sin(2 pi f2 m), m = 0..M-1.
Signal make_two_sine(const ExperimentSpec& spec);

/// Adds white Gaussian noise of standard deviation sigma from the
/// counter-based generator in noise.hpp (stream key = stream_key(seed, 0),
/// sample m uses index m). Complex signals get sigma/sqrt(2) per part.
Signal add_awgn(const Signal& signal, double sigma, std::uint64_t seed);

/// Seed of noise realization r in a sweep.
std::uint64_t realization_seed(std::uint64_t seed, int realization);

/// sqrt(mean |a_m - b_m|^2)
double rmse(const Signal& a, const Signal& b);

/// Number of coefficients with |c| > rel * max|c|.
Index count_nonzero(const ComplexVector& coefs, double rel = 1e-3);

struct DenoiseResult {
  ComplexVector coefs;
  Signal reconstruction;
  bool converged = false;
  int iterations = 0;
};

/// Estimates coefficients x for noisy ~ A x with the chosen penalty and
/// returns them with the reconstruction A x. gram_norm may be supplied to
/// skip the power iteration.
DenoiseResult denoise_frame(const Signal& noisy, const LinearOperator<Complex>& frame,
                            Method method, double lam, double gamma,
                            const SolverSettings& settings = {},
                            std::optional<double> gram_norm = std::nullopt);

struct SweepRecord {
  Method method = Method::l1;
  double lambda = 0.0;
  int realization = 0;
  double rmse = 0.0;  // rounded to the 9 digits written to CSV
  Index nnz = 0;
  bool converged = true;
};

struct SweepAggregate {
  Method method = Method::l1;
  double lambda = 0.0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (method, lambda, realization)
  std::vector<SweepAggregate> aggregates;  // ordered by (method, lambda)
  int failures = 0;

  /// The aggregate row with the smallest mean RMSE for a method.
  const SweepAggregate& best(Method m) const;
};

/// Mean and sample standard deviation per (method, lambda), in record order.
std::vector<SweepAggregate> aggregate(const std::vector<SweepRecord>& records);

/// Runs every (realization, lambda) cell, in parallel when OpenMP threads
/// are available. The output does not depend on the thread count.
SweepResult run_sweep(const ExperimentSpec& spec);

/// Amplitude of each tone carried by the coefficients: the coefficients
/// within halfwidth bins of +f and -f are synthesised on their own and
/// the amplitude is sqrt(2) * RMS of that component.
std::vector<double> tone_amplitudes(const DftFrameOperator& frame, const ComplexVector& coefs,
                                    const std::vector<double>& freqs, Index halfwidth = 6);

/// Synthetic linear chirp standing in for a recorded echolocation pulse.
struct ChirpSpec {
  Index signal_len = 400;
  double f_start = 0.05;
  double f_end = 0.35;
  double amplitude = 1.0;
  double sigma = 0.05;
  Index segment_len = 64;
  std::uint64_t seed = 1;
  SolverSettings solver;

  void validate() const;
};

Signal make_chirp(const ChirpSpec& spec);

struct StftDemoReport {
  double lam_l1 = 0.0;
  double lam_gmc = 0.0;
  double gamma = 0.0;
  double rmse_l1 = 0.0;
  double rmse_gmc = 0.0;
  Index nnz_l1 = 0;
  Index nnz_gmc = 0;
  bool converged = false;
  ComplexVector coef_l1;
  ComplexVector coef_gmc;
};

/// Denoises the noisy chirp with both penalties on an STFT frame.
StftDemoReport run_stft_demo(const ChirpSpec& chirp, double lam_l1, double lam_gmc,
                             double gamma);

/// One point of a lambda scan on the chirp.
struct StftScanPoint {
  Method method = Method::l1;
  double lambda = 0.0;
  double rmse = 0.0;
  Index nnz = 0;
};

struct StftMatchReport {
  std::vector<StftScanPoint> scan;
  StftScanPoint l1;   // RMSE-optimal l1 point
  StftScanPoint gmc;  // GMC point matched to l1's RMSE
  bool matched = false;  // |rmse_gmc / rmse_l1 - 1| <= rel_band
};

/// Scans both lambda grids, takes the RMSE-optimal l1 point and the GMC
/// point whose RMSE is closest to it.
StftMatchReport match_stft_rmse(const ChirpSpec& chirp, double gamma,
                                const std::vector<double>& l1_grid,
                                const std::vector<double>& gmc_grid, double rel_band = 0.05);

// CSV surfaces.
void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_aggregates_csv(std::ostream& out, const std::vector<SweepAggregate>& aggregates);
std::vector<SweepRecord> read_records_csv(std::istream& in);
/// Header method,lambda,rmse,nnz.
void write_scan_csv(std::ostream& out, const std::vector<StftScanPoint>& scan);

/// One real per line, or "re,im" per line.
Signal read_signal_csv(std::istream& in);
void write_signal_csv(std::ostream& out, const Signal& s);

}  // namespace gmc
