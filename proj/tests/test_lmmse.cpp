#include <doctest.h>

#include <Eigen/Core>

#include <cmath>
#include <random>
#include <vector>

#include "oracle_lmmse.hpp"
#include "softrec/lmmse.hpp"

using namespace softrec;
using testutil::lmmse_oracle;

TEST_CASE("lmmse_unbiased: identity matrix reduces to the scalar Wiener case") {
  GuardConfig guard;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2), m = Eigen::VectorXd::Zero(2), phi = Eigen::VectorXd::Ones(2);
  y << 2.0, -2.0;

  const LinearStageOutput out = lmmse_unbiased(A, y, 1.0, m, phi, guard);
  CHECK(out.gains[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.gains[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out.values[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(out.variances[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.variances[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lmmse_unbiased: zero innovation returns the prior mean") {
  GuardConfig guard;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd A(6, 10);
  Eigen::VectorXd m(10), phi(10);
  for (int i = 0; i < A.size(); ++i) A(i / 10, i % 10) = gauss(rng);
  for (int l = 0; l < 10; ++l) {
    m[l] = gauss(rng);
    phi[l] = 0.2 + 0.1 * l;
  }
  const Eigen::VectorXd y = A * m;
  const LinearStageOutput out = lmmse_unbiased(A, y, 0.3, m, phi, guard);
  for (int l = 0; l < 10; ++l) CHECK(out.values[l] == doctest::Approx(m[l]).epsilon(1e-10));
}

TEST_CASE("lmmse_unbiased: matches the extended-precision oracle to 1e-10") {
  GuardConfig guard;
  std::mt19937_64 rng(987654);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, 1.5);

  for (int rep = 0; rep < 5; ++rep) {
    const int K = 8, L = 12;
    Eigen::MatrixXd A(K, L);
    for (int i = 0; i < K; ++i)
      for (int l = 0; l < L; ++l) A(i, l) = gauss(rng);
    Eigen::VectorXd y(K), m(L), phi(L);
    for (int i = 0; i < K; ++i) y[i] = gauss(rng);
    for (int l = 0; l < L; ++l) {
      m[l] = 0.5 * gauss(rng);
      phi[l] = unif(rng);
    }
    const double sigma_w2 = unif(rng);

    const LinearStageOutput out = lmmse_unbiased(A, y, sigma_w2, m, phi, guard);
    const testutil::LmmseOracleOut oracle = lmmse_oracle(A, y, sigma_w2, m, phi);
    for (int l = 0; l < L; ++l) {
      CHECK(out.values[l] == doctest::Approx((double)oracle.values[l]).epsilon(1e-10));
      CHECK(out.variances[l] == doctest::Approx((double)oracle.variances[l]).epsilon(1e-10));
      CHECK(out.gains[l] == doctest::Approx((double)oracle.gains[l]).epsilon(1e-10));
    }
  }
}

TEST_CASE("lmmse_unbiased: gains lie strictly inside (0, 1)") {
  GuardConfig guard;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 10; ++rep) {
    const int K = 12, L = 20;
    Eigen::MatrixXd A(K, L);
    for (int i = 0; i < K * L; ++i) A(i / L, i % L) = gauss(rng);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(L);
    Eigen::VectorXd phi(L);
    for (int l = 0; l < L; ++l) phi[l] = 0.01 + 0.05 * ((l * 7) % 11);
    const LinearStageOutput out = lmmse_unbiased(A, y, 0.05, m, phi, guard);
    for (int l = 0; l < L; ++l) {
      CHECK(out.gains[l] > 0.0);
      CHECK(out.gains[l] < 1.0);
    }
  }
}

TEST_CASE("lmmse_unbiased: variance equals the harmonic-difference form to 1e-12") {
  GuardConfig guard;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  const int K = 10, L = 16;
  Eigen::MatrixXd A(K, L);
  for (int i = 0; i < K * L; ++i) A(i / L, i % L) = gauss(rng);
  Eigen::VectorXd y(K), m = Eigen::VectorXd::Zero(L), phi(L);
  for (int i = 0; i < K; ++i) y[i] = gauss(rng);
  for (int l = 0; l < L; ++l) phi[l] = 0.1 + 0.02 * l;

  const LinearStageOutput out = lmmse_unbiased(A, y, 0.2, m, phi, guard);
  for (int l = 0; l < L; ++l) {
    const double biased_var = phi[l] * (1.0 - out.gains[l]);
    const double harmonic = 1.0 / (1.0 / biased_var - 1.0 / phi[l]);
    CHECK(std::abs(out.variances[l] - harmonic) <= 1e-12);
  }
}

TEST_CASE("lmmse_unbiased: unbiasedness as regression slope 1 over many draws") {
  GuardConfig guard;
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> gauss;
  const int K = 16, L = 24;
  Eigen::MatrixXd A(K, L);
  for (int i = 0; i < K * L; ++i) A(i / L, i % L) = gauss(rng);
  Eigen::VectorXd m(L), phi(L);
  for (int l = 0; l < L; ++l) {
    m[l] = 0.3 * gauss(rng);
    phi[l] = 0.2 + 0.03 * l;
  }
  const double sigma_w2 = 0.5;

  double sxx = 0.0, sxy = 0.0, mse = 0.0, reported = 0.0;
  const int trials = 12000;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd x(L);
    for (int l = 0; l < L; ++l) x[l] = m[l] + std::sqrt(phi[l]) * gauss(rng);
    Eigen::VectorXd y = A * x;
    for (int i = 0; i < K; ++i) y[i] += std::sqrt(sigma_w2) * gauss(rng);

    const LinearStageOutput out = lmmse_unbiased(A, y, sigma_w2, m, phi, guard);
    for (int l = 0; l < L; ++l) {
      const double dx = x[l] - m[l];
      sxx += dx * dx;
      sxy += (out.values[l] - m[l]) * dx;
      mse += (out.values[l] - x[l]) * (out.values[l] - x[l]);
      reported += out.variances[l];
    }
  }
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(1.0).epsilon(0.02));
  // sample mse matches the reported variances (element average) within 5%
  CHECK(mse / trials == doctest::Approx(reported / trials).epsilon(0.05));
}

TEST_CASE("lmmse_unbiased: rejects invalid inputs") {
  GuardConfig guard;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd phi = Eigen::VectorXd::Ones(3);

  CHECK_THROWS_AS(lmmse_unbiased(A, Eigen::VectorXd::Zero(2), 1.0, m, phi, guard),
                  std::invalid_argument);
  CHECK_THROWS_AS(lmmse_unbiased(A, y, 0.0, m, phi, guard), std::invalid_argument);
  Eigen::VectorXd bad_phi = phi;
  bad_phi[1] = 0.0;
  CHECK_THROWS_AS(lmmse_unbiased(A, y, 1.0, m, bad_phi, guard), std::invalid_argument);
}
