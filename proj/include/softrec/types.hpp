#pragma once

#include <stdexcept>
#include <string>

namespace softrec {

/// A scalar estimate together with the error variance attached to it.
struct SoftEstimate {
  double value = 0.0;
  double variance = 0.0;
};

/// Numerical guards applied before forming the unbiasing factors.
///
/// The factors C_X = s2/(s2 - sigma_x2) and C_N = s2/(s2 - sigma_n2) are
/// singular when the conditional error variance reaches the reference
/// variance, which pointwise estimates can do.  With clamping enabled the
/// input variance is clamped to [var_floor, var_ceiling_ratio * reference];
/// with clamping disabled the singular case raises SingularUnbiasError.
struct GuardConfig {
  double var_floor = 1e-12;
  double var_ceiling_ratio = 1.0 - 1e-6;
  bool clamping_enabled = true;
};

inline void validate(const GuardConfig& g) {
  if (!(g.var_floor > 0.0))
    throw std::invalid_argument("GuardConfig: var_floor must be > 0");
  if (!(g.var_ceiling_ratio > 0.0 && g.var_ceiling_ratio < 1.0))
    throw std::invalid_argument("GuardConfig: var_ceiling_ratio must be in (0,1)");
}

/// Raised when an unbiasing step is requested with an error variance at or
/// above the reference variance and clamping is disabled.
class SingularUnbiasError : public std::runtime_error {
 public:
  explicit SingularUnbiasError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a linear-algebra step fails (e.g. a non-SPD system).
class NumericalFailureError : public std::runtime_error {
 public:
  explicit NumericalFailureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace softrec
