#ifndef EBMEANS_KERNEL_HPP
#define EBMEANS_KERNEL_HPP

#include <span>

namespace ebmeans {

// Known noise model of the paired observations: independent coordinates when
// rho_corr == 0, otherwise bivariate normal noise with correlation rho_corr.
struct NoiseSpec {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho_corr = 0.0;

  // Throws std::invalid_argument unless sigma1 > 0, sigma2 > 0, |rho_corr| < 1.
  void validate() const;
};

// log p(x1, x2; t1, t2) for the product-of-Gaussians kernel with independent
// coordinates. Requires noise.rho_corr == 0 and finite arguments.
double log_density_indep(double x1, double x2, double t1, double t2,
                         const NoiseSpec& noise);

// log of the bivariate normal density with mean (t1, t2) and covariance
// [[s1^2, r s1 s2], [r s1 s2, s2^2]]. Agrees with log_density_indep at r = 0.
double log_density_corr(double x1, double x2, double t1, double t2,
                        const NoiseSpec& noise);

// log{ phi((x - t) / sigma) / sigma }, the one-sequence kernel.
double log_univariate_kernel(double x, double t, double sigma);

// log(sum_k exp(values[k])) computed with max-shifting. Non-empty input.
double log_sum_exp(std::span<const double> values);

// Fixed-order pairwise summation. Used for every reduction whose result must
// not depend on how the fill of `values` was scheduled across threads.
double pairwise_sum(std::span<const double> values);

}  // namespace ebmeans

#endif
