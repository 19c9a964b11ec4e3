#include "ebmeans/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ebmeans {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite input: ") + name);
  }
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) {
    throw std::invalid_argument("NoiseSpec: sigma1 must be positive and finite");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("NoiseSpec: sigma2 must be positive and finite");
  }
  if (!(std::abs(rho_corr) < 1.0)) {
    throw std::invalid_argument("NoiseSpec: |rho_corr| must be < 1");
  }
}

double log_density_indep(double x1, double x2, double t1, double t2,
                         const NoiseSpec& noise) {
  noise.validate();
  if (noise.rho_corr != 0.0) {
    throw std::invalid_argument("log_density_indep requires rho_corr == 0");
  }
  require_finite(x1, "x1");
  require_finite(x2, "x2");
  require_finite(t1, "t1");
  require_finite(t2, "t2");
  const double z1 = (x1 - t1) / noise.sigma1;
  const double z2 = (x2 - t2) / noise.sigma2;
  return -0.5 * (z1 * z1 + z2 * z2) - std::log(noise.sigma1) -
         std::log(noise.sigma2) - kLogTwoPi;
}

double log_density_corr(double x1, double x2, double t1, double t2,
                        const NoiseSpec& noise) {
  noise.validate();
  require_finite(x1, "x1");
  require_finite(x2, "x2");
  require_finite(t1, "t1");
  require_finite(t2, "t2");
  const double r = noise.rho_corr;
  const double z1 = (x1 - t1) / noise.sigma1;
  const double z2 = (x2 - t2) / noise.sigma2;
  const double one_minus_r2 = (1.0 - r) * (1.0 + r);
  const double quad = (z1 * z1 - 2.0 * r * z1 * z2 + z2 * z2) / one_minus_r2;
  return -0.5 * quad - std::log(noise.sigma1) - std::log(noise.sigma2) -
         0.5 * std::log(one_minus_r2) - kLogTwoPi;
}

double log_univariate_kernel(double x, double t, double sigma) {
  const double z = (x - t) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * kLogTwoPi;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) {
    // all -inf stays -inf; any +inf or NaN propagates
    return m;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += std::exp(v - m);
  }
  return m + std::log(sum);
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace ebmeans
