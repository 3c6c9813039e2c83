#include "gmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include "gmc/csv.hpp"
#include "gmc/noise.hpp"

namespace gmc {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::l1:
      return "l1";
    case Method::l1_debiased:
      return "l1_debiased";
    case Method::gmc:
      return "gmc";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "l1") return Method::l1;
  if (name == "l1_debiased" || name == "l1-debiased") return Method::l1_debiased;
  if (name == "gmc") return Method::gmc;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (signal_len <= 0 || coef_len < signal_len)
    throw ParameterError("need 0 < M <= N");
  for (double f : {f1, f2})
    if (!(f > 0.0 && f < 0.5)) throw ParameterError("frequencies must lie in (0, 0.5)");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  if (realizations < 1) throw ParameterError("realizations must be >= 1");
  if (lambda_grid.empty()) throw ParameterError("lambda grid is empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw ParameterError("lambda values must be positive");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw ParameterError("lambda grid must be strictly increasing");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in [0, 1)");
  if (solver.max_iter < 1 || !(solver.tol > 0.0)) throw ParameterError("bad solver settings");
}

std::vector<double> ExperimentSpec::lambda_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ParameterError("bad lambda range");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

Signal make_two_sine(const ExperimentSpec& spec) {
  spec.validate();
  Signal s;
  s.samples.resize(spec.signal_len);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (Index m = 0; m < spec.signal_len; ++m) {
    const auto t = static_cast<double>(m);
    s.samples[m] = spec.a1 * std::cos(two_pi * spec.f1 * t) + spec.a2 * std::sin(two_pi * spec.f2 * t);
  }
  return s;
}

Signal add_awgn(const Signal& signal, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ParameterError("add_awgn: sigma must be >= 0");
  Signal out = signal;
  if (sigma == 0.0) return out;
  const std::uint64_t key = rng::stream_key(seed, 0);
  for (Index m = 0; m < out.size(); ++m) {
    const auto i = static_cast<std::uint64_t>(m);
    if (signal.complex_valued) {
      const double s = sigma / std::numbers::sqrt2;
      out.samples[m] += Complex(s * rng::gaussian(key, 2 * i), s * rng::gaussian(key, 2 * i + 1));
    } else {
      out.samples[m] += sigma * rng::gaussian(key, i);
    }
  }
  return out;
}

std::uint64_t realization_seed(std::uint64_t seed, int realization) {
  return rng::stream_key(seed, static_cast<std::uint64_t>(realization) + 1);
}

double rmse(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) throw DimensionError("rmse: length mismatch");
  if (a.size() == 0) return 0.0;
  return std::sqrt((a.samples - b.samples).squaredNorm() / static_cast<double>(a.size()));
}

Index count_nonzero(const ComplexVector& coefs, double rel) {
  if (coefs.size() == 0) return 0;
  const double peak = sup_norm(coefs);
  if (peak == 0.0) return 0;
  return (coefs.array().abs() > rel * peak).count();
}

DenoiseResult denoise_frame(const Signal& noisy, const LinearOperator<Complex>& frame,
                            Method method, double lam, double gamma,
                            const SolverSettings& settings, std::optional<double> gram_norm) {
  if (frame.rows() != noisy.size())
    throw DimensionError("denoise_frame: frame rows do not match signal length");
  SolveConfig cfg;
  cfg.lam = lam;
  cfg.gamma = method == Method::gmc ? gamma : 0.0;
  cfg.max_iter = settings.max_iter;
  cfg.tol = settings.tol;
  cfg.gram_norm = gram_norm;

  SolveReport<Complex> rep = method == Method::gmc ? gmc_solve(frame, noisy.samples, cfg)
                                                   : ista_solve(frame, noisy.samples, lam, cfg);
  DenoiseResult out;
  out.converged = rep.converged;
  out.iterations = rep.iterations;
  out.coefs = method == Method::l1_debiased
                  ? debias_least_squares(frame, noisy.samples, rep.x_star)
                  : std::move(rep.x_star);
  out.reconstruction.samples = frame.forward(out.coefs);
  out.reconstruction.complex_valued = noisy.complex_valued;
  return out;
}

const SweepAggregate& SweepResult::best(Method m) const {
  const SweepAggregate* found = nullptr;
  for (const auto& a : aggregates)
    if (a.method == m && (!found || a.rmse_mean < found->rmse_mean)) found = &a;
  if (!found) throw std::out_of_range("no aggregates for method");
  return *found;
}

std::vector<SweepAggregate> aggregate(const std::vector<SweepRecord>& records) {
  // Keyed by (method, lambda); values accumulated in record order.
  std::map<std::pair<int, double>, std::vector<double>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.method), r.lambda}].push_back(r.rmse);
  std::vector<SweepAggregate> out;
  for (const auto& [key, vals] : groups) {
    SweepAggregate a;
    a.method = static_cast<Method>(key.first);
    a.lambda = key.second;
    double sum = 0.0;
    for (double v : vals) sum += v;
    a.rmse_mean = sum / static_cast<double>(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - a.rmse_mean) * (v - a.rmse_mean);
    a.rmse_std = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) : 0.0;
    out.push_back(a);
  }
  return out;
}

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const DftFrameOperator frame(spec.signal_len, spec.coef_len);
  const double gram = estimate_gram_norm(frame, 1e-12, 100000);
  const Signal clean = make_two_sine(spec);

  const auto n_lambda = static_cast<int>(spec.lambda_grid.size());
  const int n_cells = spec.realizations * n_lambda;
  constexpr int n_methods = 3;
  std::vector<SweepRecord> cells(static_cast<std::size_t>(n_cells) * n_methods);
  int failures = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : failures)
  for (int cell = 0; cell < n_cells; ++cell) {
    const int real = cell / n_lambda;
    const int li = cell % n_lambda;
    const double lam = spec.lambda_grid[li];
    const Signal noisy = add_awgn(clean, spec.sigma, realization_seed(spec.seed, real));
    auto record = [&](Method m, const DenoiseResult& res) {
      SweepRecord r;
      r.method = m;
      r.lambda = lam;
      r.realization = real;
      r.rmse = csv::quantize(rmse(res.reconstruction, clean));
      r.nnz = count_nonzero(res.coefs);
      r.converged = res.converged;
      cells[static_cast<std::size_t>(cell) * n_methods + static_cast<int>(m)] = r;
    };
    try {
      // The debiased estimate reuses the l1 support.
      DenoiseResult l1 = denoise_frame(noisy, frame, Method::l1, lam, 0.0, spec.solver, gram);
      record(Method::l1, l1);
      DenoiseResult deb;
      deb.coefs = debias_least_squares(frame, noisy.samples, l1.coefs);
      deb.reconstruction.samples = frame.forward(deb.coefs);
      deb.converged = l1.converged;
      record(Method::l1_debiased, deb);
      record(Method::gmc,
             denoise_frame(noisy, frame, Method::gmc, lam, spec.gamma, spec.solver, gram));
    } catch (const std::exception&) {
      ++failures;
      for (Method m : kAllMethods) {
        auto& r = cells[static_cast<std::size_t>(cell) * n_methods + static_cast<int>(m)];
        if (r.lambda == 0.0) {
          r = SweepRecord{m, lam, real, std::numeric_limits<double>::quiet_NaN(), 0, false};
        }
      }
    }
  }

  SweepResult out;
  out.failures = failures;
  out.records.reserve(cells.size());
  for (Method m : kAllMethods)
    for (int li = 0; li < n_lambda; ++li)
      for (int real = 0; real < spec.realizations; ++real)
        out.records.push_back(
            cells[static_cast<std::size_t>(real * n_lambda + li) * n_methods + static_cast<int>(m)]);
  out.aggregates = aggregate(out.records);
  return out;
}

std::vector<double> tone_amplitudes(const DftFrameOperator& frame, const ComplexVector& coefs,
                                    const std::vector<double>& freqs, Index halfwidth) {
  const Index n = frame.cols();
  if (coefs.size() != n) throw DimensionError("tone_amplitudes: coefficient length");
  std::vector<double> amps;
  for (double f : freqs) {
    ComplexVector part = ComplexVector::Zero(n);
    const double centers[] = {f * static_cast<double>(n), (1.0 - f) * static_cast<double>(n)};
    for (Index k = 0; k < n; ++k) {
      for (double c : centers) {
        double d = std::abs(static_cast<double>(k) - c);
        d = std::min(d, static_cast<double>(n) - d);
        if (d <= static_cast<double>(halfwidth)) {
          part[k] = coefs[k];
          break;
        }
      }
    }
    const ComplexVector comp = frame.forward(part);
    amps.push_back(std::numbers::sqrt2 * comp.norm() / std::sqrt(static_cast<double>(comp.size())));
  }
  return amps;
}

void ChirpSpec::validate() const {
  if (signal_len <= 0) throw ParameterError("chirp: empty signal");
  if (!(f_start > 0.0 && f_start < 0.5 && f_end > 0.0 && f_end < 0.5))
    throw ParameterError("chirp: frequencies must lie in (0, 0.5)");
  if (!(sigma >= 0.0)) throw ParameterError("chirp: sigma must be >= 0");
  if (segment_len < 4 || segment_len % 4 != 0)
    throw ParameterError("chirp: segment length must be a positive multiple of 4");
}

Signal make_chirp(const ChirpSpec& spec) {
  spec.validate();
  Signal s;
  s.samples.resize(spec.signal_len);
  const double span = static_cast<double>(std::max<Index>(spec.signal_len - 1, 1));
  const double rate = (spec.f_end - spec.f_start) / span;
  for (Index m = 0; m < spec.signal_len; ++m) {
    const auto t = static_cast<double>(m);
    const double phase = 2.0 * std::numbers::pi * (spec.f_start * t + 0.5 * rate * t * t);
    s.samples[m] = spec.amplitude * std::cos(phase);
  }
  return s;
}

StftDemoReport run_stft_demo(const ChirpSpec& chirp, double lam_l1, double lam_gmc,
                             double gamma) {
  chirp.validate();
  const StftFrameOperator frame(chirp.signal_len, chirp.segment_len);
  const double gram = estimate_gram_norm(frame, 1e-12, 100000);
  const Signal clean = make_chirp(chirp);
  const Signal noisy = add_awgn(clean, chirp.sigma, chirp.seed);

  const auto l1 = denoise_frame(noisy, frame, Method::l1, lam_l1, 0.0, chirp.solver, gram);
  const auto g = denoise_frame(noisy, frame, Method::gmc, lam_gmc, gamma, chirp.solver, gram);
  StftDemoReport rep;
  rep.lam_l1 = lam_l1;
  rep.lam_gmc = lam_gmc;
  rep.gamma = gamma;
  rep.rmse_l1 = rmse(l1.reconstruction, clean);
  rep.rmse_gmc = rmse(g.reconstruction, clean);
  rep.nnz_l1 = count_nonzero(l1.coefs);
  rep.nnz_gmc = count_nonzero(g.coefs);
  rep.converged = l1.converged && g.converged;
  rep.coef_l1 = l1.coefs;
  rep.coef_gmc = g.coefs;
  return rep;
}

StftMatchReport match_stft_rmse(const ChirpSpec& chirp, double gamma,
                                const std::vector<double>& l1_grid,
                                const std::vector<double>& gmc_grid, double rel_band) {
  chirp.validate();
  if (l1_grid.empty() || gmc_grid.empty()) throw ParameterError("empty lambda grid");
  const StftFrameOperator frame(chirp.signal_len, chirp.segment_len);
  const double gram = estimate_gram_norm(frame, 1e-12, 100000);
  const Signal clean = make_chirp(chirp);
  const Signal noisy = add_awgn(clean, chirp.sigma, chirp.seed);

  StftMatchReport rep;
  auto scan = [&](Method m, const std::vector<double>& grid) {
    const auto first = rep.scan.size();
    rep.scan.resize(first + grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto res = denoise_frame(noisy, frame, m, grid[i], gamma, chirp.solver, gram);
      rep.scan[first + i] = {m, grid[i], rmse(res.reconstruction, clean), count_nonzero(res.coefs)};
    }
  };
  scan(Method::l1, l1_grid);
  scan(Method::gmc, gmc_grid);

  const auto l1_end = rep.scan.begin() + static_cast<std::ptrdiff_t>(l1_grid.size());
  rep.l1 = *std::min_element(rep.scan.begin(), l1_end,
                             [](const auto& a, const auto& b) { return a.rmse < b.rmse; });
  rep.gmc = *std::min_element(l1_end, rep.scan.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.rmse - rep.l1.rmse) < std::abs(b.rmse - rep.l1.rmse);
  });
  rep.matched = std::abs(rep.gmc.rmse / rep.l1.rmse - 1.0) <= rel_band;
  return rep;
}

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "method,lambda,realization,rmse,nnz\n";
  for (const auto& r : records)
    out << method_name(r.method) << ',' << csv::format(r.lambda) << ',' << r.realization << ','
        << csv::format(r.rmse) << ',' << r.nnz << '\n';
}

void write_aggregates_csv(std::ostream& out, const std::vector<SweepAggregate>& aggregates) {
  out << "method,lambda,rmse_mean,rmse_std\n";
  for (const auto& a : aggregates)
    out << method_name(a.method) << ',' << csv::format(a.lambda) << ','
        << csv::format(a.rmse_mean) << ',' << csv::format(a.rmse_std) << '\n';
}

void write_scan_csv(std::ostream& out, const std::vector<StftScanPoint>& scan) {
  out << "method,lambda,rmse,nnz\n";
  for (const auto& p : scan)
    out << method_name(p.method) << ',' << csv::format(p.lambda) << ',' << csv::format(p.rmse)
        << ',' << p.nnz << '\n';
}

std::vector<SweepRecord> read_records_csv(std::istream& in) {
  std::vector<SweepRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      if (line.rfind("method", 0) == 0) continue;
    }
    const auto f = csv::split(line);
    if (f.size() != 5) throw std::runtime_error("records csv: expected 5 fields");
    const auto m = parse_method(f[0]);
    if (!m) throw std::runtime_error("records csv: unknown method " + f[0]);
    SweepRecord r;
    r.method = *m;
    r.lambda = std::stod(f[1]);
    r.realization = std::stoi(f[2]);
    r.rmse = std::stod(f[3]);
    r.nnz = std::stol(f[4]);
    out.push_back(r);
  }
  return out;
}

Signal read_signal_csv(std::istream& in) {
  const auto rows = csv::read_numeric(in);
  if (rows.empty()) throw std::runtime_error("signal csv: no samples");
  Signal s;
  s.samples.resize(static_cast<Index>(rows.size()));
  s.complex_valued = rows.front().size() == 2;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && !s.complex_valued) {
      s.samples[static_cast<Index>(i)] = r[0];
    } else if (r.size() == 2 && s.complex_valued) {
      s.samples[static_cast<Index>(i)] = Complex(r[0], r[1]);
    } else {
      throw std::runtime_error("signal csv: expected one or two columns consistently");
    }
  }
  return s;
}

void write_signal_csv(std::ostream& out, const Signal& s) {
  for (Index i = 0; i < s.size(); ++i) {
    out << csv::format(s.samples[i].real());
    if (s.complex_valued) out << ',' << csv::format(s.samples[i].imag());
    out << '\n';
  }
}

}  // namespace gmc
