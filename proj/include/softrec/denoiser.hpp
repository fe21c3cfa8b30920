#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "softrec/prior.hpp"
#include "softrec/types.hpp"

namespace softrec {

/// Conditional mean and conditional error variance of one signal element
/// under the observation model z = x + n, n ~ Gaussian(0, sigma_n2).
/// Weights are evaluated in the log domain with max-subtraction, so the
/// result is well defined at any SNR.
SoftEstimate posterior_moments(double z, double sigma_n2, const DiscreteSparsePrior& prior);

/// Signal-based bias compensation of a soft estimate: the estimate is
/// rescaled by sigma_x2 / (sigma_x2 - s2) so that the resulting error is
/// orthogonal to the signal; the reported variance trades the conditional
/// variance against the prior variance.
SoftEstimate unbias_signal(const SoftEstimate& est, double sigma_x2, const GuardConfig& guard);

/// Noise-based bias compensation: the unbiased value is the affine
/// combination (1 - C_N) x_B + C_N z whose error is orthogonal to the
/// noise rather than the signal.
SoftEstimate unbias_noise(const SoftEstimate& est, double z, double sigma_n2,
                          const GuardConfig& guard);

/// Vector form of signal-based unbiasing with one variance averaged over
/// the elements.  Returns the unbiased values and the common unbiased
/// variance (1/avg_var_b - 1/sigma_x2)^{-1}.  Coincides with elementwise
/// unbias_signal when every element carries variance avg_var_b.
std::pair<Eigen::VectorXd, double> unbias_signal_avg(const Eigen::Ref<const Eigen::VectorXd>& values,
                                                     double avg_var_b, double sigma_x2,
                                                     const GuardConfig& guard);

/// Vector form of noise-based unbiasing with averaged variances; the
/// average-variance convention used by turbo/OAMP-style recursions.
std::pair<Eigen::VectorXd, double> unbias_noise_avg(const Eigen::Ref<const Eigen::VectorXd>& values,
                                                    const Eigen::Ref<const Eigen::VectorXd>& observations,
                                                    double avg_var_b, double avg_sigma_n2,
                                                    const GuardConfig& guard);

/// Mean conditional error variance E_Z[var(X|Z)] of the scalar channel,
/// evaluated by per-component quadrature over the Gaussian mixture density.
double average_biased_error_variance(const DiscreteSparsePrior& prior, double sigma_n2);

enum class CurveMode { kBiased, kSignalUnbiased, kNoiseUnbiased };

struct CurvePoint {
  double z;
  double value;
  double variance;
};

/// Characteristic curve z -> (soft value, error variance) of the denoiser,
/// optionally composed with signal- or noise-based unbiasing.  The
/// unbiasing factor of an ensemble of observations is a constant built
/// from the mean error variance, so the unbiased curves are the biased
/// curve transformed with that constant factor.
std::vector<CurvePoint> characteristic_curve(const DiscreteSparsePrior& prior, double sigma_n2,
                                             const Eigen::Ref<const Eigen::VectorXd>& z_grid,
                                             CurveMode mode, const GuardConfig& guard);

}  // namespace softrec
