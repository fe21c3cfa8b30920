#pragma once

#include <Eigen/Core>

#include "softrec/types.hpp"

namespace softrec {

/// Result of the unbiased linear stage.
struct LinearStageOutput {
  Eigen::VectorXd values;     ///< unbiased estimates
  Eigen::VectorXd variances;  ///< per-element error variances
  Eigen::VectorXd gains;      ///< per-element biased gains (diagnostic)
};

/// Per-element gains are clamped into [kGainEps, 1 - kGainEps] to keep the
/// unbiasing division away from blow-ups when a prior variance collapses.
inline constexpr double kGainEps = 1e-9;

/// Linear MMSE estimate of x from y = A x + w with per-element prior means
/// and variances, unbiased per element.
///
/// With Phi = diag(prior_var) the K x K system B = A Phi A^T + sigma_w2 I
/// is factored once (Cholesky); the biased estimate is
/// m + Phi A^T B^{-1} (y - A m), the gain k_l is the l-th diagonal entry of
/// Phi A^T B^{-1} A, and the output is the per-element unbiased pair
/// value_l = m_l + (biased_l - m_l) / k_l, variance_l = phi_l (1 - k_l) / k_l.
LinearStageOutput lmmse_unbiased(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, double sigma_w2,
                                 const Eigen::Ref<const Eigen::VectorXd>& prior_mean,
                                 const Eigen::Ref<const Eigen::VectorXd>& prior_var,
                                 const GuardConfig& guard);

}  // namespace softrec
