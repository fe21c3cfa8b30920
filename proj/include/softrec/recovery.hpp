#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "softrec/prior.hpp"
#include "softrec/types.hpp"

namespace softrec {

/// Feedback flavor of the iterative estimator: biased feedback (IMS),
/// individual signal-based unbiasing (xuIMS), individual noise-based
/// unbiasing (nuIMS), or noise-based unbiasing with average variances (TMS).
enum class RecoveryVariant { kIms, kXuIms, kNuIms, kTms };

std::string to_string(RecoveryVariant v);
RecoveryVariant parse_variant(const std::string& name);  // "ims","xuims","nuims","tms"

struct RecoveryConfig {
  RecoveryVariant variant = RecoveryVariant::kNuIms;
  int max_iterations = 50;
  /// Relative change of the feedback values below which the loop stops
  /// early; absent (the default) runs exactly max_iterations iterations.
  std::optional<double> early_stop_tol{};
  GuardConfig guard{};
  /// Initial feedback variance fed to the first linear stage.  Defaults to
  /// the prior variance; set explicitly (e.g. to s/L) to force a different
  /// initialization.
  std::optional<double> init_variance{};
};

struct IterationTraceRow {
  int iteration = 0;                    ///< 1-based
  double mean_feedback_variance = 0.0;  ///< mean over elements, after the variant step
  std::optional<double> ser{};          ///< vs truth, quantized biased feedback
};

struct IterationTrace {
  std::vector<IterationTraceRow> rows;
};

struct RecoveryResult {
  Eigen::VectorXd x_hat;
  IterationTrace trace;
};

/// Map every element to the nearest alphabet value; ties go to the value of
/// smaller magnitude, remaining ties to the smaller value.  Idempotent.
Eigen::VectorXd quantize(const Eigen::Ref<const Eigen::VectorXd>& values,
                         const Eigen::Ref<const Eigen::VectorXd>& alphabet);

/// Iterative recovery of a discrete sparse vector from y = A x + w:
/// alternate the unbiased linear MMSE stage with soft feedback under the
/// selected unbiasing variant, then quantize the final biased soft values.
/// When truth is supplied the trace carries the per-iteration SER.
RecoveryResult recover(const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& A, double sigma_w2,
                       const DiscreteSparsePrior& prior, const RecoveryConfig& cfg,
                       const Eigen::VectorXd* truth = nullptr);

}  // namespace softrec
