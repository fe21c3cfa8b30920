#include "softrec/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace softrec {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(i) for i in [0, n) on a small pool; items must not throw.
void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
  workers = std::min<long>(workers, n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t master_seed, double snr_db, std::uint64_t trial) {
  std::uint64_t z = splitmix64(master_seed);
  z = splitmix64(z ^ std::bit_cast<std::uint64_t>(snr_db));
  z = splitmix64(z ^ trial);
  return z;
}

CsInstance gen_instance(int K, int L, int s,
                        const Eigen::Ref<const Eigen::VectorXd>& nonzero_alphabet, double sigma_w2,
                        std::uint64_t seed) {
  if (!(s > 0 && s <= L)) throw std::invalid_argument("gen_instance: need 0 < s <= L");
  if (!(K > 0 && K <= L)) throw std::invalid_argument("gen_instance: need 0 < K <= L");
  if (nonzero_alphabet.size() == 0)
    throw std::invalid_argument("gen_instance: nonzero alphabet must be nonempty");
  if (!(sigma_w2 >= 0.0)) throw std::invalid_argument("gen_instance: sigma_w2 must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  CsInstance inst;
  inst.sigma_w2 = sigma_w2;
  inst.A.resize(K, L);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) inst.A(k, l) = gauss(rng);
    inst.A.col(l) /= inst.A.col(l).norm();
  }

  // support: uniform over the (L choose s) subsets via partial Fisher-Yates
  std::vector<int> idx(static_cast<size_t>(L));
  std::iota(idx.begin(), idx.end(), 0);
  inst.x_true = Eigen::VectorXd::Zero(L);
  for (int i = 0; i < s; ++i) {
    std::uniform_int_distribution<int> pick(i, L - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
  }
  std::uniform_int_distribution<Eigen::Index> sym(0, nonzero_alphabet.size() - 1);
  for (int i = 0; i < s; ++i) inst.x_true[idx[static_cast<size_t>(i)]] = nonzero_alphabet[sym(rng)];

  const double noise_scale = std::sqrt(sigma_w2);
  inst.w.resize(K);
  for (int k = 0; k < K; ++k) inst.w[k] = noise_scale * gauss(rng);

  inst.y = inst.A * inst.x_true + inst.w;
  return inst;
}

DiscreteSparsePrior SimParams::make_prior() const {
  std::vector<double> symbols(nonzero_alphabet.data(),
                              nonzero_alphabet.data() + nonzero_alphabet.size());
  symbols.push_back(0.0);
  std::sort(symbols.begin(), symbols.end());
  Eigen::VectorXd alphabet =
      Eigen::Map<const Eigen::VectorXd>(symbols.data(), static_cast<Eigen::Index>(symbols.size()));
  return DiscreteSparsePrior::uniform_sparse(alphabet, sparsity_ratio());
}

namespace {

struct TrialOutcome {
  bool failed = false;
  long symbol_errors = 0;
  std::vector<long> iteration_errors;  // filled only for convergence runs
};

long count_errors(const Eigen::VectorXd& x_hat, const Eigen::VectorXd& x_true) {
  long errors = 0;
  for (Eigen::Index i = 0; i < x_true.size(); ++i)
    if (x_hat[i] != x_true[i]) ++errors;
  return errors;
}

}  // namespace

SweepResult run_sweep(const std::vector<RecoveryVariant>& variants,
                      const std::vector<double>& snr_grid_db, long trials_per_point,
                      const SimParams& params, std::uint64_t master_seed) {
  SweepResult result;
  result.variants = variants;
  result.snr_grid_db = snr_grid_db;
  result.master_seed = master_seed;
  if (variants.empty()) return result;
  if (trials_per_point < 1) throw std::invalid_argument("run_sweep: trials_per_point must be >= 1");

  const DiscreteSparsePrior prior = params.make_prior();
  const size_t nv = variants.size();
  const size_t np = snr_grid_db.size();

  // outcome[point][trial][variant], written concurrently in disjoint slots
  std::vector<std::vector<std::vector<TrialOutcome>>> outcome(
      np, std::vector<std::vector<TrialOutcome>>(static_cast<size_t>(trials_per_point),
                                                 std::vector<TrialOutcome>(nv)));

  const long items = static_cast<long>(np) * trials_per_point;
  parallel_for(items, resolve_workers(params.workers), [&](long item) {
    const size_t point = static_cast<size_t>(item) / static_cast<size_t>(trials_per_point);
    const long trial = item % trials_per_point;
    const double snr_db = snr_grid_db[point];
    const double sigma_w2 = std::pow(10.0, -snr_db / 10.0);
    const std::uint64_t seed =
        derive_trial_seed(master_seed, snr_db, static_cast<std::uint64_t>(trial));

    CsInstance inst;
    try {
      inst = gen_instance(params.K, params.L, params.s, params.nonzero_alphabet, sigma_w2, seed);
    } catch (const std::exception&) {
      for (size_t v = 0; v < nv; ++v)
        outcome[point][static_cast<size_t>(trial)][v].failed = true;
      return;
    }
    for (size_t v = 0; v < nv; ++v) {
      TrialOutcome& slot = outcome[point][static_cast<size_t>(trial)][v];
      try {
        RecoveryConfig cfg;
        cfg.variant = variants[v];
        cfg.max_iterations = params.iterations;
        cfg.guard = params.guard;
        const RecoveryResult rec = recover(inst.y, inst.A, sigma_w2, prior, cfg);
        slot.symbol_errors = count_errors(rec.x_hat, inst.x_true);
      } catch (const std::exception&) {
        slot.failed = true;
      }
    }
  });

  // deterministic reduction in (variant, point, trial) order
  result.stats.assign(nv, std::vector<VariantPointStats>(np));
  for (size_t v = 0; v < nv; ++v)
    for (size_t p = 0; p < np; ++p) {
      VariantPointStats& st = result.stats[v][p];
      for (long t = 0; t < trials_per_point; ++t) {
        const TrialOutcome& slot = outcome[p][static_cast<size_t>(t)][v];
        if (slot.failed) {
          ++st.failures;
        } else {
          ++st.trials;
          st.symbol_errors += slot.symbol_errors;
        }
      }
      st.ser = st.trials > 0 ? static_cast<double>(st.symbol_errors) /
                                   (static_cast<double>(st.trials) * params.L)
                             : 0.0;
    }
  return result;
}

ConvergenceResult run_convergence(const std::vector<RecoveryVariant>& variants, double snr_db,
                                  long trials, const SimParams& params, std::uint64_t master_seed) {
  ConvergenceResult result;
  result.variants = variants;
  result.snr_db = snr_db;
  result.trials = trials;
  result.master_seed = master_seed;
  if (variants.empty()) return result;
  if (trials < 1) throw std::invalid_argument("run_convergence: trials must be >= 1");

  const DiscreteSparsePrior prior = params.make_prior();
  const size_t nv = variants.size();
  const double sigma_w2 = std::pow(10.0, -snr_db / 10.0);

  std::vector<std::vector<TrialOutcome>> outcome(static_cast<size_t>(trials),
                                                 std::vector<TrialOutcome>(nv));

  parallel_for(trials, resolve_workers(params.workers), [&](long trial) {
    const std::uint64_t seed =
        derive_trial_seed(master_seed, snr_db, static_cast<std::uint64_t>(trial));
    CsInstance inst;
    try {
      inst = gen_instance(params.K, params.L, params.s, params.nonzero_alphabet, sigma_w2, seed);
    } catch (const std::exception&) {
      for (size_t v = 0; v < nv; ++v) outcome[static_cast<size_t>(trial)][v].failed = true;
      return;
    }
    for (size_t v = 0; v < nv; ++v) {
      TrialOutcome& slot = outcome[static_cast<size_t>(trial)][v];
      try {
        RecoveryConfig cfg;
        cfg.variant = variants[v];
        cfg.max_iterations = params.iterations;
        cfg.guard = params.guard;
        const RecoveryResult rec = recover(inst.y, inst.A, sigma_w2, prior, cfg, &inst.x_true);
        slot.iteration_errors.reserve(rec.trace.rows.size());
        for (const IterationTraceRow& row : rec.trace.rows)
          slot.iteration_errors.push_back(std::lround(*row.ser * params.L));
      } catch (const std::exception&) {
        slot.failed = true;
      }
    }
  });

  result.mean_ser.assign(nv, std::vector<double>(static_cast<size_t>(params.iterations), 0.0));
  result.failures.assign(nv, 0);
  for (size_t v = 0; v < nv; ++v) {
    std::vector<long> totals(static_cast<size_t>(params.iterations), 0);
    long completed = 0;
    for (long t = 0; t < trials; ++t) {
      const TrialOutcome& slot = outcome[static_cast<size_t>(t)][v];
      if (slot.failed) {
        ++result.failures[v];
        continue;
      }
      ++completed;
      for (size_t i = 0; i < slot.iteration_errors.size(); ++i) totals[i] += slot.iteration_errors[i];
    }
    for (size_t i = 0; i < totals.size(); ++i)
      result.mean_ser[v][i] = completed > 0 ? static_cast<double>(totals[i]) /
                                                  (static_cast<double>(completed) * params.L)
                                            : 0.0;
  }
  return result;
}

}  // namespace softrec
