#include "ebmeans/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ebmeans/risk.hpp"

namespace ebmeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVanish = -760.0;  // exp() underflows to exactly zero below

void require_all_finite(std::span<const double> v, const char* name) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("non-finite entry in ") + name);
    }
  }
}

// Weighted posterior-mean ratio sum_j theta[j] exp(l_j) / sum_j exp(l_j),
// max-shifted, with the signed numerator aggregated in positive and negative
// parts. log_term(j) supplies l_j.
template <typename LogTerm>
double shifted_ratio(std::span<const double> theta, double fallback,
                     LogTerm&& log_term) {
  const std::size_t n = theta.size();
  double m = -kInf;
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, log_term(j));
  const auto [lo_it, hi_it] = std::minmax_element(theta.begin(), theta.end());
  if (m == -kInf) {
    // every kernel underflowed outright; keep the estimate in the hull
    return std::clamp(fallback, *lo_it, *hi_it);
  }
  double den = 0.0, npos = 0.0, nneg = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dl = log_term(j) - m;
    if (dl < kVanish) continue;
    const double k = std::exp(dl);
    den += k;
    if (theta[j] >= 0.0) {
      npos += theta[j] * k;
    } else {
      nneg -= theta[j] * k;
    }
  }
  return std::clamp((npos - nneg) / den, *lo_it, *hi_it);
}

}  // namespace

void MeanSet::validate() const {
  if (theta1.empty() || theta1.size() != theta2.size()) {
    throw std::invalid_argument("MeanSet: theta1/theta2 must share length n >= 1");
  }
  require_all_finite(theta1, "theta1");
  require_all_finite(theta2, "theta2");
}

void ObservationSet::validate() const {
  if (x1.empty() || x1.size() != x2.size()) {
    throw std::invalid_argument("ObservationSet: x1/x2 must share length n >= 1");
  }
  require_all_finite(x1, "x1");
  require_all_finite(x2, "x2");
  noise.validate();
}

std::vector<double> oracle_integrative(const ObservationSet& obs,
                                       const MeanSet& means) {
  obs.validate();
  means.validate();
  if (obs.noise.rho_corr != 0.0) {
    throw std::invalid_argument("oracle_integrative requires independent noise");
  }
  if (obs.x1.size() != means.theta1.size()) {
    throw std::invalid_argument("oracle_integrative: observation/mean length mismatch");
  }
  const std::size_t n = obs.x1.size();
  const double inv1 = 1.0 / obs.noise.sigma1;
  const double inv2 = 1.0 / obs.noise.sigma2;
  std::vector<double> est(n);
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double x1 = obs.x1[i], x2 = obs.x2[i];
    est[i] = shifted_ratio(means.theta1, x1, [&](std::size_t j) {
      const double z1 = (x1 - means.theta1[j]) * inv1;
      const double z2 = (x2 - means.theta2[j]) * inv2;
      return -0.5 * (z1 * z1 + z2 * z2);
    });
  }
  return est;
}

std::vector<double> oracle_regularized(const ObservationSet& obs,
                                       const MeanSet& means, double rho) {
  means.validate();
  if (obs.x1.size() != means.theta1.size()) {
    throw std::invalid_argument("oracle_regularized: observation/mean length mismatch");
  }
  RuleParams params{SupportVector{means.theta1, means.theta2}, rho};
  return apply_rule(params, obs);
}

std::vector<double> oracle_univariate(std::span<const double> x1,
                                      std::span<const double> theta1,
                                      double sigma1) {
  if (x1.empty() || x1.size() != theta1.size()) {
    throw std::invalid_argument("oracle_univariate: length mismatch");
  }
  if (!(sigma1 > 0.0)) {
    throw std::invalid_argument("oracle_univariate: sigma1 must be positive");
  }
  require_all_finite(x1, "x1");
  require_all_finite(theta1, "theta1");
  const double inv = 1.0 / sigma1;
  std::vector<double> est(x1.size());
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(x1.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double x = x1[i];
    est[i] = shifted_ratio(theta1, x, [&](std::size_t j) {
      const double z = (x - theta1[j]) * inv;
      return -0.5 * z * z;
    });
  }
  return est;
}

std::vector<double> oracle_correlated(const ObservationSet& obs,
                                      const MeanSet& means) {
  obs.validate();
  means.validate();
  if (obs.x1.size() != means.theta1.size()) {
    throw std::invalid_argument("oracle_correlated: observation/mean length mismatch");
  }
  const std::size_t n = obs.x1.size();
  const double r = obs.noise.rho_corr;
  const double inv1 = 1.0 / obs.noise.sigma1;
  const double inv2 = 1.0 / obs.noise.sigma2;
  const double inv_one_minus_r2 = 1.0 / ((1.0 - r) * (1.0 + r));
  std::vector<double> est(n);
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double x1 = obs.x1[i], x2 = obs.x2[i];
    est[i] = shifted_ratio(means.theta1, x1, [&](std::size_t j) {
      const double z1 = (x1 - means.theta1[j]) * inv1;
      const double z2 = (x2 - means.theta2[j]) * inv2;
      return -0.5 * (z1 * z1 - 2.0 * r * z1 * z2 + z2 * z2) * inv_one_minus_r2;
    });
  }
  return est;
}

}  // namespace ebmeans
