#include "softrec/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softrec/denoiser.hpp"
#include "softrec/lmmse.hpp"

namespace softrec {

std::string to_string(RecoveryVariant v) {
  switch (v) {
    case RecoveryVariant::kIms: return "ims";
    case RecoveryVariant::kXuIms: return "xuims";
    case RecoveryVariant::kNuIms: return "nuims";
    case RecoveryVariant::kTms: return "tms";
  }
  throw std::logic_error("unreachable");
}

RecoveryVariant parse_variant(const std::string& name) {
  if (name == "ims") return RecoveryVariant::kIms;
  if (name == "xuims") return RecoveryVariant::kXuIms;
  if (name == "nuims") return RecoveryVariant::kNuIms;
  if (name == "tms") return RecoveryVariant::kTms;
  throw std::invalid_argument("unknown variant '" + name + "' (expected ims,xuims,nuims,tms)");
}

Eigen::VectorXd quantize(const Eigen::Ref<const Eigen::VectorXd>& values,
                         const Eigen::Ref<const Eigen::VectorXd>& alphabet) {
  const Eigen::Index n = alphabet.size();
  if (n == 0) throw std::invalid_argument("quantize: alphabet must be nonempty");

  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    // locate the first alphabet entry >= v, then compare with its predecessor
    Eigen::Index hi = std::lower_bound(alphabet.data(), alphabet.data() + n, v) - alphabet.data();
    double best;
    if (hi == 0) {
      best = alphabet[0];
    } else if (hi == n) {
      best = alphabet[n - 1];
    } else {
      const double lo_val = alphabet[hi - 1];
      const double hi_val = alphabet[hi];
      const double dl = v - lo_val;
      const double dh = hi_val - v;
      if (dl < dh) {
        best = lo_val;
      } else if (dh < dl) {
        best = hi_val;
      } else {
        // tie: smaller magnitude wins, then the smaller value
        const double al = std::abs(lo_val), ah = std::abs(hi_val);
        best = al < ah ? lo_val : ah < al ? hi_val : lo_val;
      }
    }
    out[i] = best;
  }
  return out;
}

namespace {

double count_ser(const Eigen::VectorXd& quantized, const Eigen::VectorXd& truth) {
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i)
    if (quantized[i] != truth[i]) ++errors;
  return static_cast<double>(errors) / static_cast<double>(truth.size());
}

}  // namespace

RecoveryResult recover(const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& A, double sigma_w2,
                       const DiscreteSparsePrior& prior, const RecoveryConfig& cfg,
                       const Eigen::VectorXd* truth) {
  const Eigen::Index L = A.cols();
  if (y.size() != A.rows()) throw std::invalid_argument("recover: y/A dimension mismatch");
  if (truth && truth->size() != L) throw std::invalid_argument("recover: truth length mismatch");
  if (cfg.max_iterations < 1) throw std::invalid_argument("recover: max_iterations must be >= 1");
  const GuardConfig& guard = cfg.guard;
  if (guard.clamping_enabled) validate(guard);

  const double sigma_x2 = prior.variance();
  const double init_var = cfg.init_variance.value_or(sigma_x2);
  if (!(init_var > 0.0)) throw std::invalid_argument("recover: init variance must be > 0");

  // Signal-based unbiasing is applied only where the conditional variance
  // stays below half the prior variance; that bound keeps the unbiased
  // feedback variance within [0, sigma_x2], which the rescaling above it
  // would not.  Elements beyond it pass their biased pair through.
  const double xu_threshold =
      std::min(0.5, guard.clamping_enabled ? guard.var_ceiling_ratio : 1.0) * sigma_x2;

  Eigen::VectorXd fb_val = Eigen::VectorXd::Zero(L);
  Eigen::VectorXd fb_var = Eigen::VectorXd::Constant(L, init_var);
  Eigen::VectorXd soft_val(L), soft_var(L);

  RecoveryResult result;
  result.trace.rows.reserve(static_cast<size_t>(cfg.max_iterations));

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const LinearStageOutput lin = lmmse_unbiased(A, y, sigma_w2, fb_val, fb_var, guard);

    for (Eigen::Index l = 0; l < L; ++l) {
      const SoftEstimate est = posterior_moments(lin.values[l], lin.variances[l], prior);
      soft_val[l] = est.value;
      soft_var[l] = est.variance;
    }

    const Eigen::VectorXd prev_val = fb_val;
    switch (cfg.variant) {
      case RecoveryVariant::kIms:
        fb_val = soft_val;
        fb_var = soft_var;
        break;
      case RecoveryVariant::kXuIms:
        for (Eigen::Index l = 0; l < L; ++l) {
          if (!guard.clamping_enabled || soft_var[l] < xu_threshold) {
            const SoftEstimate u = unbias_signal({soft_val[l], soft_var[l]}, sigma_x2, guard);
            fb_val[l] = u.value;
            fb_var[l] = u.variance;
          } else {
            fb_val[l] = soft_val[l];
            fb_var[l] = soft_var[l];
          }
        }
        break;
      case RecoveryVariant::kNuIms:
        for (Eigen::Index l = 0; l < L; ++l) {
          const SoftEstimate u =
              unbias_noise({soft_val[l], soft_var[l]}, lin.values[l], lin.variances[l], guard);
          fb_val[l] = u.value;
          fb_var[l] = u.variance;
        }
        break;
      case RecoveryVariant::kTms: {
        double avg_b = soft_var.mean();
        if (guard.clamping_enabled) avg_b = std::max(avg_b, guard.var_floor);
        auto [vals, common_var] =
            unbias_noise_avg(soft_val, lin.values, avg_b, lin.variances.mean(), guard);
        fb_val = std::move(vals);
        fb_var.setConstant(common_var);
        break;
      }
    }

    if (guard.clamping_enabled) {
      fb_var = fb_var.cwiseMax(guard.var_floor);
      if (cfg.variant == RecoveryVariant::kIms || cfg.variant == RecoveryVariant::kXuIms)
        fb_var = fb_var.cwiseMin(sigma_x2);
    }

    IterationTraceRow row;
    row.iteration = it;
    row.mean_feedback_variance = fb_var.mean();
    if (truth) row.ser = count_ser(quantize(soft_val, prior.alphabet()), *truth);
    result.trace.rows.push_back(row);

    if (cfg.early_stop_tol) {
      const double change = (fb_val - prev_val).norm();
      if (change <= *cfg.early_stop_tol * std::max(prev_val.norm(), 1e-300)) break;
    }
  }

  result.x_hat = quantize(soft_val, prior.alphabet());
  return result;
}

}  // namespace softrec
