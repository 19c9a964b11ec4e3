#ifndef EBMEANS_ORACLE_HPP
#define EBMEANS_ORACLE_HPP

#include <span>
#include <vector>

#include "ebmeans/kernel.hpp"

namespace ebmeans {

// True means of the two sequences. Ground truth for oracle rules and
// simulations; never available to the data-driven estimator.
struct MeanSet {
  std::vector<double> theta1;
  std::vector<double> theta2;

  void validate() const;
};

// Paired observations (x1[i], x2[i]) with their known noise model.
struct ObservationSet {
  std::vector<double> x1;
  std::vector<double> x2;
  NoiseSpec noise;

  void validate() const;
};

// Posterior-mean rule under the empirical distribution of the true mean
// pairs: estimate_i = sum_j theta1[j] p_j(x_i) / sum_j p_j(x_i).
// Requires independent noise.
std::vector<double> oracle_integrative(const ObservationSet& obs,
                                       const MeanSet& means);

// Regularized form: x1 + sum_j (theta1[j] - x1) p_j / (rho + sum_j p_j).
// Identical to oracle_integrative at rho = 0.
std::vector<double> oracle_regularized(const ObservationSet& obs,
                                       const MeanSet& means, double rho);

// One-sequence analog using only x1.
std::vector<double> oracle_univariate(std::span<const double> x1,
                                      std::span<const double> theta1,
                                      double sigma1);

// Bivariate-normal-noise analog; reduces to oracle_integrative at r = 0.
std::vector<double> oracle_correlated(const ObservationSet& obs,
                                      const MeanSet& means);

}  // namespace ebmeans

#endif
