#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "softrec/recovery.hpp"

namespace softrec {

/// One problem realization of y = A x + w.
struct CsInstance {
  Eigen::MatrixXd A;       ///< K x L, unit-norm columns
  Eigen::VectorXd x_true;  ///< L, exactly s nonzero entries
  Eigen::VectorXd w;       ///< K, Gaussian noise
  Eigen::VectorXd y;       ///< A * x_true + w
  double sigma_w2 = 0.0;
};

/// Draw one instance, fully determined by the seed (mt19937_64).  Draw
/// order: A column by column (then each column scaled to unit norm), the
/// support by partial Fisher-Yates, the nonzero values uniformly over
/// nonzero_alphabet, then w as standard normals scaled by sqrt(sigma_w2).
CsInstance gen_instance(int K, int L, int s,
                        const Eigen::Ref<const Eigen::VectorXd>& nonzero_alphabet, double sigma_w2,
                        std::uint64_t seed);

/// Counter-based per-trial seed derivation ("splitmix64-v1"): the master
/// seed, the bit pattern of snr_db and the trial index are chained through
/// the splitmix64 finalizer.  Sweeps and convergence studies at the same
/// SNR therefore consume identical instances.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, double snr_db, std::uint64_t trial);

inline constexpr const char* kSeedDerivationRule = "splitmix64-v1";
inline constexpr const char* kRngFamily = "mt19937_64";

/// Common experiment parameters of the Monte Carlo harness.
struct SimParams {
  int K = 129;
  int L = 258;
  int s = 15;
  Eigen::VectorXd nonzero_alphabet = (Eigen::VectorXd(2) << -1.0, 1.0).finished();
  int iterations = 50;
  GuardConfig guard{};
  int workers = 0;  ///< 0 = hardware concurrency

  DiscreteSparsePrior make_prior() const;
  double sparsity_ratio() const { return static_cast<double>(s) / static_cast<double>(L); }
};

struct VariantPointStats {
  long trials = 0;  ///< completed trials
  long failures = 0;
  long symbol_errors = 0;
  double ser = 0.0;  ///< symbol_errors / (trials * L)
};

struct SweepResult {
  std::vector<RecoveryVariant> variants;
  std::vector<double> snr_grid_db;
  /// stats[variant][point]
  std::vector<std::vector<VariantPointStats>> stats;
  std::uint64_t master_seed = 0;
  std::string seed_rule = kSeedDerivationRule;
  std::string rng_family = kRngFamily;
};

/// Paired SER sweep over the SNR grid: sigma_w2 = 10^(-snr_db/10), and for
/// a given (point, trial) every variant consumes the identical instance.
/// Trials run on a worker pool; the reduction is in trial order, so the
/// result does not depend on the degree of parallelism.
SweepResult run_sweep(const std::vector<RecoveryVariant>& variants,
                      const std::vector<double>& snr_grid_db, long trials_per_point,
                      const SimParams& params, std::uint64_t master_seed);

struct ConvergenceResult {
  std::vector<RecoveryVariant> variants;
  double snr_db = 0.0;
  long trials = 0;
  /// mean_ser[variant][iteration], averaged over completed trials
  std::vector<std::vector<double>> mean_ser;
  std::vector<long> failures;  ///< per variant
  std::uint64_t master_seed = 0;
  std::string seed_rule = kSeedDerivationRule;
  std::string rng_family = kRngFamily;
};

/// Per-iteration mean SER at one SNR point, aggregated across paired trials.
ConvergenceResult run_convergence(const std::vector<RecoveryVariant>& variants, double snr_db,
                                  long trials, const SimParams& params, std::uint64_t master_seed);

}  // namespace softrec
