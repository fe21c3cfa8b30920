// softrec command-line front end: characteristic curves, SER sweeps and
// convergence studies, emitted as CSV with a "# key=value" manifest header.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "softrec/csvio.hpp"
#include "softrec/denoiser.hpp"
#include "softrec/simkit.hpp"

namespace {

using namespace softrec;

Eigen::VectorXd parse_number_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      values.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (values.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<RecoveryVariant> parse_variants(const std::string& text) {
  std::vector<RecoveryVariant> variants;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      variants.push_back(parse_variant(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--variants: unknown variant '" + item +
                                 "' (choose from ims,xuims,nuims,tms)");
    }
  }
  if (variants.empty()) throw CLI::ValidationError("--variants: empty list");
  return variants;
}

std::string join_variants(const std::vector<RecoveryVariant>& variants) {
  std::string out;
  for (size_t i = 0; i < variants.size(); ++i) {
    if (i) out += ',';
    out += to_string(variants[i]);
  }
  return out;
}

std::string join_numbers(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw CLI::ValidationError("--snr-db-step must be > 0");
  if (hi < lo) throw CLI::ValidationError("--snr-db-max must be >= --snr-db-min");
  std::vector<double> grid;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < n; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << content;
}

// ---------------------------------------------------------------- curves

struct CurvesOptions {
  std::vector<double> sigma_n2;
  double p1 = 0.1;
  std::string alphabet = "-1,0,1";
  double z_min = -2.0;
  double z_max = 2.0;
  long z_steps = 401;
  std::string mode = "all";
  bool no_clamp = false;
  std::string out;
};

int run_curves(const CurvesOptions& opt) {
  if (opt.sigma_n2.empty())
    throw CLI::ValidationError("curves: at least one --sigma-n2 is required");
  for (double v : opt.sigma_n2)
    if (!(v > 0.0)) throw CLI::ValidationError("--sigma-n2 values must be > 0");
  if (opt.z_steps < 1) throw CLI::ValidationError("--z-steps must be >= 1");
  if (!(opt.z_max >= opt.z_min)) throw CLI::ValidationError("--z-max must be >= --z-min");

  const Eigen::VectorXd alphabet = parse_number_list(opt.alphabet, "--alphabet");
  Eigen::VectorXd probs(alphabet.size());
  for (Eigen::Index i = 0; i < alphabet.size(); ++i)
    probs[i] = alphabet[i] == 0.0 ? 1.0 - opt.p1 * static_cast<double>(alphabet.size() - 1)
                                  : opt.p1;
  const DiscreteSparsePrior prior(alphabet, probs);

  GuardConfig guard;
  guard.clamping_enabled = !opt.no_clamp;

  Eigen::VectorXd grid(opt.z_steps);
  if (opt.z_steps == 1) {
    grid[0] = opt.z_min;
  } else {
    const double h = (opt.z_max - opt.z_min) / static_cast<double>(opt.z_steps - 1);
    for (long i = 0; i < opt.z_steps; ++i) grid[i] = opt.z_min + h * static_cast<double>(i);
  }

  std::vector<std::pair<std::string, CurveMode>> modes;
  if (opt.mode == "biased" || opt.mode == "all") modes.emplace_back("biased", CurveMode::kBiased);
  if (opt.mode == "xu" || opt.mode == "all") modes.emplace_back("xu", CurveMode::kSignalUnbiased);
  if (opt.mode == "nu" || opt.mode == "all") modes.emplace_back("nu", CurveMode::kNoiseUnbiased);
  if (modes.empty())
    throw CLI::ValidationError("--mode must be one of biased,xu,nu,all");

  RunManifest manifest("curves");
  manifest.add("alphabet", opt.alphabet);
  manifest.add("p1", opt.p1);
  manifest.add("sigma_n2", [&] {
    std::string s;
    for (size_t i = 0; i < opt.sigma_n2.size(); ++i)
      s += (i ? "," : "") + format_double(opt.sigma_n2[i]);
    return s;
  }());
  manifest.add("z_min", opt.z_min);
  manifest.add("z_max", opt.z_max);
  manifest.add("z_steps", opt.z_steps);
  manifest.add("mode", opt.mode);
  manifest.add("clamping", std::string(opt.no_clamp ? "off" : "on"));

  std::ostringstream body;
  body << "z,mode,sigma_n2,soft_value,error_variance\n";
  for (const auto& [name, mode] : modes)
    for (double sn2 : opt.sigma_n2)
      for (const CurvePoint& row : characteristic_curve(prior, sn2, grid, mode, guard))
        body << format_double(row.z) << ',' << name << ',' << format_double(sn2) << ','
             << format_double(row.value) << ',' << format_double(row.variance) << '\n';

  std::ostringstream out;
  manifest.write(out);
  out << body.str();
  emit(opt.out, out.str());
  return 0;
}

// ----------------------------------------------------------------- sweep

struct SweepOptions {
  std::string variants = "ims,xuims,nuims,tms";
  int L = 258;
  int K = 129;
  int s = 15;
  std::string nonzero_alphabet = "-1,1";
  double snr_min = 10.0;
  double snr_max = 20.0;
  double snr_step = 1.0;
  double snr_single = 18.0;  // convergence only
  long trials = 2000;
  int iterations = 50;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

SimParams to_params(const SweepOptions& opt) {
  SimParams params;
  params.K = opt.K;
  params.L = opt.L;
  params.s = opt.s;
  params.nonzero_alphabet = parse_number_list(opt.nonzero_alphabet, "--nonzero-alphabet");
  params.iterations = opt.iterations;
  params.workers = opt.workers;
  return params;
}

void add_common(RunManifest& manifest, const SweepOptions& opt,
                const std::vector<RecoveryVariant>& variants, const SimParams& params) {
  manifest.add("variants", join_variants(variants));
  manifest.add("L", static_cast<long>(opt.L));
  manifest.add("K", static_cast<long>(opt.K));
  manifest.add("s", static_cast<long>(opt.s));
  manifest.add("nonzero_alphabet", join_numbers(params.nonzero_alphabet));
  manifest.add("trials", opt.trials);
  manifest.add("iterations", static_cast<long>(opt.iterations));
  manifest.add_seed(opt.seed);
  manifest.add("rng", kRngFamily);
  manifest.add("seed_derivation", kSeedDerivationRule);
  manifest.add("workers", static_cast<long>(opt.workers));
}

int run_sweep_cmd(const SweepOptions& opt) {
  const std::vector<RecoveryVariant> variants = parse_variants(opt.variants);
  const SimParams params = to_params(opt);
  const std::vector<double> grid = make_grid(opt.snr_min, opt.snr_max, opt.snr_step);

  const SweepResult result = run_sweep(variants, grid, opt.trials, params, opt.seed);

  RunManifest manifest("sweep");
  add_common(manifest, opt, variants, params);
  manifest.add("snr_db_min", opt.snr_min);
  manifest.add("snr_db_max", opt.snr_max);
  manifest.add("snr_db_step", opt.snr_step);

  long failures = 0;
  for (const auto& per_variant : result.stats)
    for (const VariantPointStats& st : per_variant) failures += st.failures;
  manifest.add("failed_trials", failures);

  std::ostringstream out;
  manifest.write(out);
  out << "variant,snr_db,trials,symbol_errors,ser\n";
  for (size_t v = 0; v < variants.size(); ++v)
    for (size_t p = 0; p < grid.size(); ++p) {
      const VariantPointStats& st = result.stats[v][p];
      out << to_string(variants[v]) << ',' << format_double(grid[p]) << ',' << st.trials << ','
          << st.symbol_errors << ',' << format_double(st.ser) << '\n';
    }
  emit(opt.out, out.str());
  return failures == 0 ? 0 : 3;
}

int run_convergence_cmd(const SweepOptions& opt) {
  const std::vector<RecoveryVariant> variants = parse_variants(opt.variants);
  const SimParams params = to_params(opt);

  const ConvergenceResult result =
      run_convergence(variants, opt.snr_single, opt.trials, params, opt.seed);

  RunManifest manifest("convergence");
  add_common(manifest, opt, variants, params);
  manifest.add("snr_db", opt.snr_single);
  long failures = 0;
  for (size_t v = 0; v < variants.size(); ++v) {
    failures += result.failures[v];
    manifest.add("trials_completed_" + to_string(variants[v]),
                 opt.trials - result.failures[v]);
  }
  manifest.add("failed_trials", failures);

  std::ostringstream out;
  manifest.write(out);
  out << "variant,iteration,mean_ser\n";
  for (size_t v = 0; v < variants.size(); ++v)
    for (size_t i = 0; i < result.mean_ser[v].size(); ++i)
      out << to_string(variants[v]) << ',' << (i + 1) << ','
          << format_double(result.mean_ser[v][i]) << '\n';
  emit(opt.out, out.str());
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"softrec: unbiased soft-feedback recovery of discrete sparse signals"};
  app.set_version_flag("--version", std::string("softrec ") + softrec::kToolVersion);
  app.require_subcommand(1);

  CurvesOptions curves_opt;
  CLI::App* curves = app.add_subcommand(
      "curves", "Characteristic curves of the scalar denoiser (biased and unbiased)");
  curves->add_option("--sigma-n2", curves_opt.sigma_n2,
                     "Observation noise variance (repeatable)")
      ->default_val(std::vector<double>{0.1, 0.01});
  curves->add_option("--p1", curves_opt.p1, "Probability of each nonzero symbol")
      ->default_val(0.1);
  curves->add_option("--alphabet", curves_opt.alphabet, "Comma-separated alphabet (must contain 0)")
      ->default_val("-1,0,1");
  curves->add_option("--z-min", curves_opt.z_min, "Grid start")->default_val(-2.0);
  curves->add_option("--z-max", curves_opt.z_max, "Grid end")->default_val(2.0);
  curves->add_option("--z-steps", curves_opt.z_steps, "Grid size")->default_val(401);
  curves->add_option("--mode", curves_opt.mode, "Curve set: biased|xu|nu|all")
      ->default_val("all")
      ->check(CLI::IsMember({"biased", "xu", "nu", "all"}));
  curves->add_flag("--no-clamp", curves_opt.no_clamp, "Disable variance clamping guards");
  curves->add_option("--out,-o", curves_opt.out, "Output CSV path (default: stdout)");

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand("sweep", "SER over an SNR grid, paired Monte Carlo trials");
  sweep->add_option("--variants", sweep_opt.variants, "Comma list from ims,xuims,nuims,tms")
      ->default_val("ims,xuims,nuims,tms");
  sweep->add_option("--L", sweep_opt.L, "Signal length")->default_val(258)->check(CLI::PositiveNumber);
  sweep->add_option("--K", sweep_opt.K, "Measurements")->default_val(129)->check(CLI::PositiveNumber);
  sweep->add_option("--s", sweep_opt.s, "Sparsity")->default_val(15)->check(CLI::PositiveNumber);
  sweep->add_option("--nonzero-alphabet", sweep_opt.nonzero_alphabet, "Nonzero symbol set")
      ->default_val("-1,1");
  sweep->add_option("--snr-db-min", sweep_opt.snr_min, "Grid start, 10log10(1/sigma_w2)")
      ->default_val(10.0);
  sweep->add_option("--snr-db-max", sweep_opt.snr_max, "Grid end")->default_val(20.0);
  sweep->add_option("--snr-db-step", sweep_opt.snr_step, "Grid step")->default_val(1.0);
  sweep->add_option("--trials", sweep_opt.trials, "Trials per grid point")
      ->default_val(2000)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--iterations", sweep_opt.iterations, "Recovery iterations")
      ->default_val(50)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_opt.seed, "Master seed")->default_val(1);
  sweep->add_option("--workers", sweep_opt.workers, "Worker threads (0 = all cores)")
      ->default_val(0)
      ->envname("SOFTREC_WORKERS");
  sweep->add_option("--out,-o", sweep_opt.out, "Output CSV path (default: stdout)");

  SweepOptions conv_opt;
  conv_opt.trials = 500;
  CLI::App* conv = app.add_subcommand("convergence", "Mean SER per iteration at one SNR point");
  conv->add_option("--variants", conv_opt.variants, "Comma list from ims,xuims,nuims,tms")
      ->default_val("ims,xuims,nuims,tms");
  conv->add_option("--L", conv_opt.L, "Signal length")->default_val(258)->check(CLI::PositiveNumber);
  conv->add_option("--K", conv_opt.K, "Measurements")->default_val(129)->check(CLI::PositiveNumber);
  conv->add_option("--s", conv_opt.s, "Sparsity")->default_val(15)->check(CLI::PositiveNumber);
  conv->add_option("--nonzero-alphabet", conv_opt.nonzero_alphabet, "Nonzero symbol set")
      ->default_val("-1,1");
  conv->add_option("--snr-db", conv_opt.snr_single, "SNR point, 10log10(1/sigma_w2)")
      ->default_val(18.0);
  conv->add_option("--trials", conv_opt.trials, "Trials")->default_val(500)->check(CLI::PositiveNumber);
  conv->add_option("--iterations", conv_opt.iterations, "Recovery iterations")
      ->default_val(50)
      ->check(CLI::PositiveNumber);
  conv->add_option("--seed", conv_opt.seed, "Master seed")->default_val(1);
  conv->add_option("--workers", conv_opt.workers, "Worker threads (0 = all cores)")
      ->default_val(0)
      ->envname("SOFTREC_WORKERS");
  conv->add_option("--out,-o", conv_opt.out, "Output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (curves->parsed()) return run_curves(curves_opt);
    if (sweep->parsed()) return run_sweep_cmd(sweep_opt);
    if (conv->parsed()) return run_convergence_cmd(conv_opt);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "softrec: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
