#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace softrec {

/// Distribution of one signal element: a finite, strictly increasing
/// alphabet that contains 0, with point probabilities.  Only zero-mean
/// priors are accepted; the variance is derived at construction.
class DiscreteSparsePrior {
 public:
  DiscreteSparsePrior(Eigen::VectorXd alphabet, Eigen::VectorXd probabilities)
      : alphabet_(std::move(alphabet)), probabilities_(std::move(probabilities)) {
    const Eigen::Index n = alphabet_.size();
    if (n < 1 || probabilities_.size() != n)
      throw std::invalid_argument("prior: alphabet and probabilities must have equal, nonzero length");

    bool has_zero = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(alphabet_[i]))
        throw std::invalid_argument("prior: alphabet values must be finite");
      if (i > 0 && !(alphabet_[i] > alphabet_[i - 1]))
        throw std::invalid_argument("prior: alphabet must be strictly increasing");
      if (alphabet_[i] == 0.0) has_zero = true;
      const double p = probabilities_[i];
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("prior: probabilities must lie in [0,1]");
    }
    if (!has_zero) throw std::invalid_argument("prior: alphabet must contain 0");

    if (std::abs(probabilities_.sum() - 1.0) > 1e-12)
      throw std::invalid_argument("prior: probabilities must sum to 1");
    if (std::abs(alphabet_.dot(probabilities_)) > 1e-12)
      throw std::invalid_argument("prior: mean must be zero (asymmetric priors are not supported)");

    variance_ = alphabet_.array().square().matrix().dot(probabilities_);
    if (!(variance_ > 0.0)) throw std::invalid_argument("prior: variance must be positive");

    log_probabilities_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      log_probabilities_[i] = probabilities_[i] > 0.0
                                  ? std::log(probabilities_[i])
                                  : -std::numeric_limits<double>::infinity();
  }

  /// Prior with uniform probabilities on the nonzero symbols: the alphabet
  /// must contain 0, the off-zero mass (the sparsity ratio s/L) is split
  /// evenly over the remaining symbols.
  static DiscreteSparsePrior uniform_sparse(const Eigen::VectorXd& alphabet, double off_zero_mass) {
    if (!(off_zero_mass >= 0.0 && off_zero_mass <= 1.0))
      throw std::invalid_argument("prior: off-zero mass must lie in [0,1]");
    const Eigen::Index n = alphabet.size();
    if (n < 2) throw std::invalid_argument("prior: need at least one nonzero symbol");
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i)
      p[i] = alphabet[i] == 0.0 ? 1.0 - off_zero_mass
                                : off_zero_mass / static_cast<double>(n - 1);
    return DiscreteSparsePrior(alphabet, p);
  }

  const Eigen::VectorXd& alphabet() const { return alphabet_; }
  const Eigen::VectorXd& probabilities() const { return probabilities_; }
  const Eigen::VectorXd& log_probabilities() const { return log_probabilities_; }
  Eigen::Index size() const { return alphabet_.size(); }
  double variance() const { return variance_; }
  double min_symbol() const { return alphabet_[0]; }
  double max_symbol() const { return alphabet_[alphabet_.size() - 1]; }

 private:
  Eigen::VectorXd alphabet_;
  Eigen::VectorXd probabilities_;
  Eigen::VectorXd log_probabilities_;
  double variance_ = 0.0;
};

}  // namespace softrec
