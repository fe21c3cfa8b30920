// Independent linear-stage oracle: normal equations with an explicit
// Gauss-Jordan inverse in extended precision, plain loops throughout.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace testutil {

struct LmmseOracleOut {
  std::vector<long double> values, variances, gains;
};

inline LmmseOracleOut lmmse_oracle(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                                   double sigma_w2, const Eigen::VectorXd& m,
                                   const Eigen::VectorXd& phi) {
  const int K = static_cast<int>(A.rows());
  const int L = static_cast<int>(A.cols());

  std::vector<std::vector<long double>> B(K, std::vector<long double>(K, 0.0L));
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      long double acc = i == j ? (long double)sigma_w2 : 0.0L;
      for (int l = 0; l < L; ++l) acc += (long double)A(i, l) * phi[l] * A(j, l);
      B[i][j] = acc;
    }

  std::vector<std::vector<long double>> inv(K, std::vector<long double>(K, 0.0L));
  for (int i = 0; i < K; ++i) inv[i][i] = 1.0L;
  for (int col = 0; col < K; ++col) {
    int pivot = col;
    for (int r = col + 1; r < K; ++r)
      if (fabsl(B[r][col]) > fabsl(B[pivot][col])) pivot = r;
    std::swap(B[col], B[pivot]);
    std::swap(inv[col], inv[pivot]);
    const long double d = B[col][col];
    for (int c = 0; c < K; ++c) {
      B[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < K; ++r) {
      if (r == col) continue;
      const long double f = B[r][col];
      if (f == 0.0L) continue;
      for (int c = 0; c < K; ++c) {
        B[r][c] -= f * B[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }

  std::vector<long double> resid(K);
  for (int i = 0; i < K; ++i) {
    long double acc = y[i];
    for (int l = 0; l < L; ++l) acc -= (long double)A(i, l) * m[l];
    resid[i] = acc;
  }
  std::vector<long double> binv_r(K, 0.0L);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) binv_r[i] += inv[i][j] * resid[j];

  LmmseOracleOut out;
  out.values.resize(L);
  out.variances.resize(L);
  out.gains.resize(L);
  for (int l = 0; l < L; ++l) {
    long double biased = 0.0L;
    for (int i = 0; i < K; ++i) biased += (long double)A(i, l) * binv_r[i];
    biased = m[l] + phi[l] * biased;

    long double quad = 0.0L;
    for (int i = 0; i < K; ++i) {
      long double row = 0.0L;
      for (int j = 0; j < K; ++j) row += inv[i][j] * A(j, l);
      quad += (long double)A(i, l) * row;
    }
    const long double k = phi[l] * quad;
    out.gains[l] = k;
    out.values[l] = m[l] + (biased - m[l]) / k;
    out.variances[l] = phi[l] * (1.0L - k) / k;
  }
  return out;
}

}  // namespace testutil
