#include "softrec/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softrec {

SoftEstimate posterior_moments(double z, double sigma_n2, const DiscreteSparsePrior& prior) {
  if (!(sigma_n2 > 0.0)) throw std::invalid_argument("posterior_moments: sigma_n2 must be > 0");
  if (!std::isfinite(z)) throw std::invalid_argument("posterior_moments: observation must be finite");

  const Eigen::VectorXd& c = prior.alphabet();
  const Eigen::VectorXd& lp = prior.log_probabilities();
  const Eigen::Index n = c.size();
  const double inv_two_var = 1.0 / (2.0 * sigma_n2);

  double max_lw = -std::numeric_limits<double>::infinity();
  double lw_buf[16];
  double* lw = n <= 16 ? lw_buf : new double[static_cast<size_t>(n)];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = z - c[i];
    lw[i] = lp[i] - d * d * inv_two_var;
    max_lw = std::max(max_lw, lw[i]);
  }

  // max-subtraction keeps the largest weight at exp(0) = 1, so the sums
  // below cannot underflow to an all-zero posterior
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = std::exp(lw[i] - max_lw);
    s0 += w;
    s1 += w * c[i];
    s2 += w * c[i] * c[i];
  }
  if (lw != lw_buf) delete[] lw;

  const double mean = s1 / s0;
  SoftEstimate est;
  est.value = std::clamp(mean, prior.min_symbol(), prior.max_symbol());
  est.variance = std::max(s2 / s0 - mean * mean, 0.0);
  return est;
}

namespace {

// Clamp the input variance against the reference, or reject the singular
// case when clamping is off.
double guarded_variance(double s2, double reference, const GuardConfig& guard, const char* who) {
  if (!(s2 >= 0.0) || !std::isfinite(s2))
    throw std::invalid_argument(std::string(who) + ": variance must be finite and >= 0");
  if (guard.clamping_enabled) {
    validate(guard);
    return std::clamp(s2, guard.var_floor, guard.var_ceiling_ratio * reference);
  }
  if (s2 >= reference)
    throw SingularUnbiasError(std::string(who) + ": error variance reaches the reference variance");
  return s2;
}

}  // namespace

SoftEstimate unbias_signal(const SoftEstimate& est, double sigma_x2, const GuardConfig& guard) {
  if (!(sigma_x2 > 0.0)) throw std::invalid_argument("unbias_signal: sigma_x2 must be > 0");
  if (!std::isfinite(est.value)) throw std::invalid_argument("unbias_signal: value must be finite");
  const double s2 = guarded_variance(est.variance, sigma_x2, guard, "unbias_signal");
  const double cx = s2 / (s2 - sigma_x2);
  SoftEstimate out;
  out.value = sigma_x2 / (sigma_x2 - s2) * est.value;
  out.variance = (1.0 - cx * cx) * s2 + cx * cx * sigma_x2;
  out.variance = std::max(out.variance, est.variance);  // unbiasing never shrinks the error
  return out;
}

SoftEstimate unbias_noise(const SoftEstimate& est, double z, double sigma_n2,
                          const GuardConfig& guard) {
  if (!(sigma_n2 > 0.0)) throw std::invalid_argument("unbias_noise: sigma_n2 must be > 0");
  if (!std::isfinite(est.value) || !std::isfinite(z))
    throw std::invalid_argument("unbias_noise: inputs must be finite");
  const double s2 = guarded_variance(est.variance, sigma_n2, guard, "unbias_noise");
  const double cn = s2 / (s2 - sigma_n2);
  SoftEstimate out;
  out.value = (1.0 - cn) * est.value + cn * z;
  out.variance = (1.0 - cn * cn) * s2 + cn * cn * sigma_n2;
  return out;
}

std::pair<Eigen::VectorXd, double> unbias_signal_avg(const Eigen::Ref<const Eigen::VectorXd>& values,
                                                     double avg_var_b, double sigma_x2,
                                                     const GuardConfig& guard) {
  if (!(avg_var_b > 0.0)) throw std::invalid_argument("unbias_signal_avg: avg_var_b must be > 0");
  if (!(sigma_x2 > 0.0)) throw std::invalid_argument("unbias_signal_avg: sigma_x2 must be > 0");
  const double s2 = guarded_variance(avg_var_b, sigma_x2, guard, "unbias_signal_avg");
  const double var_u = 1.0 / (1.0 / s2 - 1.0 / sigma_x2);
  return {Eigen::VectorXd((var_u / s2) * values), var_u};
}

std::pair<Eigen::VectorXd, double> unbias_noise_avg(const Eigen::Ref<const Eigen::VectorXd>& values,
                                                    const Eigen::Ref<const Eigen::VectorXd>& observations,
                                                    double avg_var_b, double avg_sigma_n2,
                                                    const GuardConfig& guard) {
  if (values.size() != observations.size())
    throw std::invalid_argument("unbias_noise_avg: vectors must have equal length");
  if (!(avg_var_b > 0.0)) throw std::invalid_argument("unbias_noise_avg: avg_var_b must be > 0");
  if (!(avg_sigma_n2 > 0.0)) throw std::invalid_argument("unbias_noise_avg: avg_sigma_n2 must be > 0");
  const double s2 = guarded_variance(avg_var_b, avg_sigma_n2, guard, "unbias_noise_avg");
  const double var_u = 1.0 / (1.0 / s2 - 1.0 / avg_sigma_n2);
  Eigen::VectorXd out = var_u * (values.array() / s2 - observations.array() / avg_sigma_n2);
  return {std::move(out), var_u};
}

double average_biased_error_variance(const DiscreteSparsePrior& prior, double sigma_n2) {
  if (!(sigma_n2 > 0.0))
    throw std::invalid_argument("average_biased_error_variance: sigma_n2 must be > 0");
  // E_Z[var(X|Z)] = sum_c p(c) int phi_sigma(t) var(X | c + t) dt, one
  // trapezoid per mixture component; the integrand is smooth and decays as
  // the Gaussian, so a wide fixed grid is accurate to round-off.
  constexpr int kNodes = 4001;
  constexpr double kSpan = 12.0;
  const double sigma = std::sqrt(sigma_n2);
  const double h = 2.0 * kSpan * sigma / (kNodes - 1);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma_n2);

  double total = 0.0;
  for (Eigen::Index ci = 0; ci < prior.size(); ++ci) {
    const double p = prior.probabilities()[ci];
    if (p == 0.0) continue;
    const double c = prior.alphabet()[ci];
    double acc = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const double t = -kSpan * sigma + h * i;
      const double f = posterior_moments(c + t, sigma_n2, prior).variance *
                       norm * std::exp(-t * t / (2.0 * sigma_n2));
      acc += (i == 0 || i == kNodes - 1) ? 0.5 * f : f;
    }
    total += p * acc * h;
  }
  return total;
}

std::vector<CurvePoint> characteristic_curve(const DiscreteSparsePrior& prior, double sigma_n2,
                                             const Eigen::Ref<const Eigen::VectorXd>& z_grid,
                                             CurveMode mode, const GuardConfig& guard) {
  for (Eigen::Index i = 0; i < z_grid.size(); ++i) {
    if (!std::isfinite(z_grid[i]))
      throw std::invalid_argument("characteristic_curve: grid must be finite");
    if (i > 0 && z_grid[i] < z_grid[i - 1])
      throw std::invalid_argument("characteristic_curve: grid must be sorted");
  }

  double factor_c = 0.0;
  double reference = 0.0;
  if (mode != CurveMode::kBiased) {
    reference = mode == CurveMode::kSignalUnbiased ? prior.variance() : sigma_n2;
    const double avg = average_biased_error_variance(prior, sigma_n2);
    const double s2 = [&] {
      if (guard.clamping_enabled) {
        validate(guard);
        return std::clamp(avg, guard.var_floor, guard.var_ceiling_ratio * reference);
      }
      if (avg >= reference)
        throw SingularUnbiasError("characteristic_curve: mean error variance reaches the reference");
      return avg;
    }();
    factor_c = s2 / (s2 - reference);
  }

  std::vector<CurvePoint> rows;
  rows.reserve(static_cast<size_t>(z_grid.size()));
  for (Eigen::Index i = 0; i < z_grid.size(); ++i) {
    const double z = z_grid[i];
    const SoftEstimate b = posterior_moments(z, sigma_n2, prior);
    CurvePoint row{z, b.value, b.variance};
    if (mode == CurveMode::kSignalUnbiased) {
      row.value = (1.0 - factor_c) * b.value;
      row.variance = (1.0 - factor_c * factor_c) * b.variance + factor_c * factor_c * reference;
    } else if (mode == CurveMode::kNoiseUnbiased) {
      row.value = (1.0 - factor_c) * b.value + factor_c * z;
      row.variance = (1.0 - factor_c * factor_c) * b.variance + factor_c * factor_c * reference;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace softrec
