#include "softrec/lmmse.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace softrec {

LinearStageOutput lmmse_unbiased(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, double sigma_w2,
                                 const Eigen::Ref<const Eigen::VectorXd>& prior_mean,
                                 const Eigen::Ref<const Eigen::VectorXd>& prior_var,
                                 const GuardConfig& guard) {
  const Eigen::Index K = A.rows();
  const Eigen::Index L = A.cols();
  if (y.size() != K || prior_mean.size() != L || prior_var.size() != L)
    throw std::invalid_argument("lmmse_unbiased: inconsistent dimensions");
  if (!(sigma_w2 > 0.0)) throw std::invalid_argument("lmmse_unbiased: sigma_w2 must be > 0");
  for (Eigen::Index l = 0; l < L; ++l)
    if (!(prior_var[l] > 0.0) || !std::isfinite(prior_var[l]))
      throw std::invalid_argument("lmmse_unbiased: prior variances must be positive and finite");
  if (guard.clamping_enabled) validate(guard);

  // B = A Phi A^T + sigma_w2 I, built as a symmetric rank update of
  // A sqrt(Phi); only the lower triangle is referenced by the factorization.
  Eigen::MatrixXd scaled = A * prior_var.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(K, K);
  B.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  B.diagonal().array() += sigma_w2;

  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success)
    throw NumericalFailureError("lmmse_unbiased: Cholesky factorization failed (B not SPD)");

  // W = Lc^{-1} A gives both the gains (squared column norms) and, with
  // u = Lc^{-1} (y - A m), the biased estimate m + Phi W^T u.
  Eigen::MatrixXd W = A;
  llt.matrixL().solveInPlace(W);
  Eigen::VectorXd u = y - A * prior_mean;
  llt.matrixL().solveInPlace(u);

  LinearStageOutput out;
  out.gains = prior_var.cwiseProduct(W.colwise().squaredNorm().transpose());
  out.gains = out.gains.cwiseMax(kGainEps).cwiseMin(1.0 - kGainEps);

  Eigen::VectorXd innovation = prior_var.cwiseProduct(W.transpose() * u);
  out.values = prior_mean + innovation.cwiseQuotient(out.gains);
  out.variances =
      prior_var.cwiseProduct((Eigen::VectorXd::Ones(L) - out.gains).cwiseQuotient(out.gains));
  return out;
}

}  // namespace softrec
