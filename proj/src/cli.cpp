#include "gmc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <omp.h>

#include "gmc/csv.hpp"
#include "gmc/experiments.hpp"
#include "gmc/multivariate_penalties.hpp"
#include "gmc/scalar_penalties.hpp"

namespace gmc::cli {
namespace {

namespace fs = std::filesystem;

/// Raised inside a subcommand for bad flag values or unreadable inputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

struct SweepFlags {
  ExperimentSpec spec;
  double lambda_min = 0.5;
  double lambda_max = 3.5;
  double lambda_step = 0.25;
  std::string out = ".";
  int threads = 0;
};

struct DenoiseFlags {
  std::string input;
  std::string signal = "two-sine";
  std::string frame = "dft";
  std::string method = "gmc";
  double lambda = 1.0;
  double gamma = 0.8;
  std::optional<double> sigma;
  std::uint64_t seed = 1;
  Index signal_len = 0;
  Index coef_len = 256;
  Index segment_len = 64;
  SolverSettings solver;
  std::string out = ".";
};

struct EvalFlags {
  std::string b_path;
  double lo = -3.0;
  double hi = 3.0;
  int steps = 61;
  double inner_tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out;
};

struct ThresholdFlags {
  double lambda = 1.0;
  double mu = 2.0;
  double y_max = 3.0;
  int steps = 601;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_sweep(SweepFlags& f, std::ostream& out, std::ostream& err) {
  if (f.threads > 0) omp_set_num_threads(f.threads);
  try {
    f.spec.lambda_grid = ExperimentSpec::lambda_range(f.lambda_min, f.lambda_max, f.lambda_step);
    f.spec.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const SweepResult res = run_sweep(f.spec);
  const fs::path dir(f.out);
  {
    auto rec = open_output(dir / "records.csv");
    write_records_csv(rec, res.records);
    auto agg = open_output(dir / "aggregates.csv");
    write_aggregates_csv(agg, res.aggregates);
  }
  for (Method m : kAllMethods) {
    const auto& b = res.best(m);
    out << "best " << method_name(m) << " lambda=" << csv::format(b.lambda)
        << " rmse_mean=" << csv::format(b.rmse_mean) << '\n';
  }
  const auto stalled = std::count_if(res.records.begin(), res.records.end(),
                                    [](const SweepRecord& r) { return !r.converged; });
  if (stalled > 0) err << "sweep: warning: " << stalled << " cell(s) stopped at max_iter\n";
  if (res.failures > 0) {
    err << "sweep: " << res.failures << " cell(s) failed\n";
    return kFailure;
  }
  return kOk;
}

int cmd_denoise(DenoiseFlags& f, std::ostream& out, std::ostream& err) {
  const auto method = parse_method(f.method);
  if (!method) throw UsageError("unknown method '" + f.method + "' (l1, l1-debiased, gmc)");
  if (f.frame != "dft" && f.frame != "stft") throw UsageError("frame must be dft or stft");

  Signal noisy;
  std::optional<Signal> clean;
  try {
    if (!f.input.empty()) {
      std::ifstream in(f.input);
      if (!in) throw UsageError("cannot read input " + f.input);
      noisy = read_signal_csv(in);
      if (f.sigma && *f.sigma > 0.0) noisy = add_awgn(noisy, *f.sigma, f.seed);
    } else if (f.signal == "two-sine") {
      ExperimentSpec spec;
      if (f.signal_len > 0) spec.signal_len = f.signal_len;
      spec.coef_len = std::max(f.coef_len, spec.signal_len);
      clean = make_two_sine(spec);
      noisy = add_awgn(*clean, f.sigma.value_or(1.0), f.seed);
    } else if (f.signal == "chirp") {
      ChirpSpec spec;
      if (f.signal_len > 0) spec.signal_len = f.signal_len;
      spec.segment_len = f.segment_len;
      clean = make_chirp(spec);
      noisy = add_awgn(*clean, f.sigma.value_or(0.05), f.seed);
    } else {
      throw UsageError("signal must be two-sine or chirp");
    }
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }

  std::unique_ptr<LinearOperator<Complex>> frame;
  try {
    if (f.frame == "dft") {
      if (f.coef_len < noisy.size()) throw UsageError("need N >= signal length");
      frame = std::make_unique<DftFrameOperator>(noisy.size(), f.coef_len);
    } else {
      frame = std::make_unique<StftFrameOperator>(noisy.size(), f.segment_len);
    }
    SolveConfig probe;
    probe.lam = f.lambda;
    probe.gamma = *method == Method::gmc ? f.gamma : 0.0;
    probe.max_iter = f.solver.max_iter;
    probe.tol = f.solver.tol;
    probe.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }

  const DenoiseResult res = denoise_frame(noisy, *frame, *method, f.lambda, f.gamma, f.solver);
  const fs::path dir(f.out);
  {
    auto rec = open_output(dir / "reconstruction.csv");
    write_signal_csv(rec, res.reconstruction);
    auto coef = open_output(dir / "coefficients.csv");
    coef << "index,magnitude\n";
    for (Index i = 0; i < res.coefs.size(); ++i)
      coef << i << ',' << csv::format(std::abs(res.coefs[i])) << '\n';
  }
  if (clean)
    out << "rmse " << csv::format(rmse(res.reconstruction, *clean)) << '\n';
  else
    out << "rmse_vs_input " << csv::format(rmse(res.reconstruction, noisy)) << '\n';
  out << "nnz " << count_nonzero(res.coefs) << '\n';
  out << "iterations " << res.iterations << '\n';
  if (!res.converged) err << "denoise: warning: solver stopped at max_iter before reaching tol\n";
  return kOk;
}

int cmd_eval(EvalFlags& f, std::ostream& out) {
  DenseOperator<double>::Matrix b;
  try {
    b = read_dense_csv_file(f.b_path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot read B: ") + e.what());
  }
  if (b.cols() != 2) throw UsageError("grid mode needs B with exactly 2 columns");
  if (f.steps < 2 || !(f.hi > f.lo)) throw UsageError("bad grid range");
  if (!(f.inner_tol > 0.0)) throw UsageError("inner tolerance must be positive");

  const GmcPenalty<double> pen(std::make_shared<DenseOperator<double>>(b), f.inner_tol);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!f.out.empty()) {
    file = open_output(f.out);
    sink = &file;
  }
  *sink << "x1,x2,S_B,psi_B\n";
  const double h = (f.hi - f.lo) / (f.steps - 1);
  RealVector x(2);
  for (int i = 0; i < f.steps; ++i) {
    for (int j = 0; j < f.steps; ++j) {
      x << f.lo + i * h, f.lo + j * h;
      const double s = eval_generalized_huber(pen, x).value;
      *sink << csv::format(x[0]) << ',' << csv::format(x[1]) << ',' << csv::format(s) << ','
            << csv::format(l1_norm(x) - s) << '\n';
    }
  }
  return kOk;
}

int cmd_threshold(ThresholdFlags& f, std::ostream& out) {
  const FirmParams params{f.lambda, f.mu};
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (f.steps < 2 || !(f.y_max > 0.0)) throw UsageError("bad curve range");
  std::ofstream file;
  std::ostream* sink = &out;
  if (!f.out.empty()) {
    file = open_output(f.out);
    sink = &file;
  }
  *sink << "y,firm,soft\n";
  const double h = 2.0 * f.y_max / (f.steps - 1);
  for (int i = 0; i < f.steps; ++i) {
    // Symmetric grid; the midpoint is exactly zero for odd step counts.
    const double y = (i - (f.steps - 1) / 2.0) * h;
    *sink << csv::format(y) << ',' << csv::format(firm(y, params)) << ','
          << csv::format(soft(y, f.lambda)) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse regularisation with generalized minimax-concave penalties", "gmc"};
  app.require_subcommand(1);

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "Two-tone DFT-frame denoising sweep over lambda");
  sweep->add_option("-M,--signal-len", sw.spec.signal_len, "Signal length")->capture_default_str();
  sweep->add_option("-N,--coef-len", sw.spec.coef_len, "DFT coefficients")->capture_default_str();
  sweep->add_option("--f1", sw.spec.f1)->capture_default_str();
  sweep->add_option("--f2", sw.spec.f2)->capture_default_str();
  sweep->add_option("--sigma", sw.spec.sigma, "Noise standard deviation")->capture_default_str();
  sweep->add_option("--realizations", sw.spec.realizations)->capture_default_str();
  sweep->add_option("--gamma", sw.spec.gamma, "GMC non-convexity, [0, 1)")->capture_default_str();
  sweep->add_option("--lambda-min", sw.lambda_min)->capture_default_str();
  sweep->add_option("--lambda-max", sw.lambda_max)->capture_default_str();
  sweep->add_option("--lambda-step", sw.lambda_step)->capture_default_str();
  sweep->add_option("--max-iter", sw.spec.solver.max_iter)->capture_default_str();
  sweep->add_option("--tol", sw.spec.solver.tol)->capture_default_str();
  sweep->add_option("--seed", sw.spec.seed)->capture_default_str();
  sweep->add_option("--threads", sw.threads, "OpenMP threads (0 = runtime default)");
  sweep->add_option("--out", sw.out, "Output directory")->capture_default_str();

  DenoiseFlags dn;
  auto* denoise = app.add_subcommand("denoise", "Denoise one signal with one penalty");
  denoise->add_option("--input", dn.input, "Signal CSV (one value or re,im per line)");
  denoise->add_option("--signal", dn.signal, "Built-in signal: two-sine or chirp")->capture_default_str();
  denoise->add_option("--frame", dn.frame, "dft or stft")->capture_default_str();
  denoise->add_option("--method", dn.method, "l1, l1-debiased or gmc")->capture_default_str();
  denoise->add_option("--lambda", dn.lambda)->capture_default_str();
  denoise->add_option("--gamma", dn.gamma)->capture_default_str();
  denoise->add_option("--sigma", dn.sigma, "Noise added before denoising");
  denoise->add_option("--seed", dn.seed)->capture_default_str();
  denoise->add_option("-M,--signal-len", dn.signal_len, "Built-in signal length");
  denoise->add_option("-N,--coef-len", dn.coef_len)->capture_default_str();
  denoise->add_option("--segment-len", dn.segment_len)->capture_default_str();
  denoise->add_option("--max-iter", dn.solver.max_iter)->capture_default_str();
  denoise->add_option("--tol", dn.solver.tol)->capture_default_str();
  denoise->add_option("--out", dn.out, "Output directory")->capture_default_str();

  EvalFlags ev;
  auto* eval = app.add_subcommand("eval", "Generalized Huber / GMC values on a 2-D grid");
  eval->add_option("--B", ev.b_path, "Dense B matrix CSV, one row per line")->required();
  eval->add_option("--min", ev.lo)->capture_default_str();
  eval->add_option("--max", ev.hi)->capture_default_str();
  eval->add_option("--steps", ev.steps, "Grid points per axis")->capture_default_str();
  eval->add_option("--inner-tol", ev.inner_tol)->capture_default_str();
  eval->add_option("--seed", ev.seed, "Accepted for uniformity; evaluation is deterministic");
  eval->add_option("--out", ev.out, "Output CSV (stdout if omitted)");

  ThresholdFlags th;
  auto* thresh = app.add_subcommand("threshold", "Firm and soft threshold curves");
  thresh->add_option("--lambda", th.lambda)->capture_default_str();
  thresh->add_option("--mu", th.mu)->capture_default_str();
  thresh->add_option("--y-max", th.y_max)->capture_default_str();
  thresh->add_option("--steps", th.steps)->capture_default_str();
  thresh->add_option("--seed", th.seed, "Accepted for uniformity; curves are deterministic");
  thresh->add_option("--out", th.out, "Output CSV (stdout if omitted)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep) return cmd_sweep(sw, out, err);
    if (*denoise) return cmd_denoise(dn, out, err);
    if (*eval) return cmd_eval(ev, out);
    if (*thresh) return cmd_threshold(th, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace gmc::cli
