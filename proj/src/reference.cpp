#include "ebmeans/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ebmeans/kernel.hpp"

namespace ebmeans::ref {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log kernels of observation i against every support point.
std::vector<double> log_kernels(double x1, double x2, bool univariate,
                                std::span<const double> t1,
                                std::span<const double> t2, double s1,
                                double s2) {
  std::vector<double> lk(t1.size());
  for (std::size_t j = 0; j < t1.size(); ++j) {
    lk[j] = univariate ? log_univariate_kernel(x1, t1[j], s1)
                       : log_univariate_kernel(x1, t1[j], s1) +
                             log_univariate_kernel(x2, t2[j], s2);
  }
  return lk;
}

struct RatioTerms {
  double g;        // sum_j (t1_j - x1) k_j / (rho + sum_j k_j)
  double ratio_d;  // sum_j k_j / (rho + sum_j k_j)
  double ratio_a;  // sum_j (t1_j - x1)^2 k_j / (rho + sum_j k_j)
  bool degenerate;
};

RatioTerms ratio_terms(double x1, std::span<const double> lk,
                       std::span<const double> t1, double rho) {
  const double m = *std::max_element(lk.begin(), lk.end());
  RatioTerms out{0.0, 0.0, 0.0, false};
  if (m == -kInf) {
    out.degenerate = true;
    return out;
  }
  double den = 0.0, bp = 0.0, bn = 0.0, a = 0.0;
  for (std::size_t j = 0; j < lk.size(); ++j) {
    const double k = std::exp(lk[j] - m);
    const double w = t1[j] - x1;
    den += k;
    a += w * w * k;
    if (w >= 0.0) {
      bp += w * k;
    } else {
      bn -= w * k;
    }
  }
  const double denom = (rho > 0.0 ? std::exp(std::log(rho) - m) : 0.0) + den;
  if (!(denom > 0.0) || denom == kInf) {
    out.degenerate = denom != kInf;
    return out;  // rho-dominated rows shrink everything to zero as well
  }
  out.g = (bp - bn) / denom;
  out.ratio_d = den / denom;
  out.ratio_a = a / denom;
  return out;
}

std::vector<double> estimates_impl(std::span<const double> x1,
                                   std::span<const double> x2, bool univariate,
                                   std::span<const double> t1,
                                   std::span<const double> t2, double rho,
                                   double s1, double s2) {
  const auto [lo_it, hi_it] = std::minmax_element(t1.begin(), t1.end());
  std::vector<double> est(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const auto lk = log_kernels(x1[i], univariate ? 0.0 : x2[i], univariate,
                                t1, t2, s1, s2);
    const auto rt = ratio_terms(x1[i], lk, t1, rho);
    if (rt.degenerate) {
      est[i] = x1[i];
      continue;
    }
    const double lo = rho > 0.0 ? std::min(*lo_it, x1[i]) : *lo_it;
    const double hi = rho > 0.0 ? std::max(*hi_it, x1[i]) : *hi_it;
    est[i] = std::clamp(x1[i] + rt.g, lo, hi);
  }
  return est;
}

double sure_impl(std::span<const double> x1, std::span<const double> x2,
                 bool univariate, std::span<const double> t1,
                 std::span<const double> t2, double rho, double s1,
                 double s2) {
  const double s1sq = s1 * s1;
  double acc = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const auto lk = log_kernels(x1[i], univariate ? 0.0 : x2[i], univariate,
                                t1, t2, s1, s2);
    const auto rt = ratio_terms(x1[i], lk, t1, rho);
    acc += 2.0 * rt.ratio_a - 2.0 * s1sq * rt.ratio_d - rt.g * rt.g;
  }
  return acc / static_cast<double>(x1.size()) + s1sq;
}

FitResult descent_impl(std::span<const double> x1, std::span<const double> x2,
                       bool univariate, double s1, double s2,
                       const FitConfig& config) {
  config.validate();
  const std::size_t n = x1.size();
  std::vector<double> t1(x1.begin(), x1.end());
  std::vector<double> t2 =
      univariate ? std::vector<double>{} : std::vector<double>(x2.begin(), x2.end());
  auto eval = [&]() {
    return sure_impl(x1, x2, univariate, t1, t2, config.rho, s1, s2);
  };

  FitResult result;
  double cur = eval();
  double prev_sweep = cur;
  const int ndims = univariate ? 1 : 2;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    for (int dim = 1; dim <= ndims; ++dim) {
      std::vector<double>& t = (dim == 1) ? t1 : t2;
      const std::span<const double> xd = (dim == 1) ? x1 : x2;
      const double sigma = (dim == 1) ? s1 : s2;
      for (std::size_t j = 0; j < n; ++j) {
        const double t_cur = t[j];
        double best_value = t_cur;
        double best_score = cur;
        double best_dist = std::abs(t_cur - xd[j]);
        for (double c : candidate_grid(xd[j], sigma, config)) {
          t[j] = c;
          const double score = eval();
          const double dist = std::abs(c - xd[j]);
          if (score < best_score ||
              (score == best_score &&
               (dist < best_dist || (dist == best_dist && c < best_value)))) {
            best_value = c;
            best_score = score;
            best_dist = dist;
          }
        }
        t[j] = best_value;
        cur = best_score;
      }
    }
    result.sure_trace.push_back(cur);
    result.sweeps_used = sweep;
    if (std::abs(cur - prev_sweep) <= config.tol_epsilon) {
      result.converged = true;
      break;
    }
    prev_sweep = cur;
  }
  result.sure_value = cur;
  result.support.t1 = std::move(t1);
  result.support.t2 = std::move(t2);
  result.estimates = estimates_impl(x1, x2, univariate, result.support.t1,
                                    result.support.t2, config.rho, s1, s2);
  return result;
}

}  // namespace

std::vector<double> apply_rule(const RuleParams& params,
                               const ObservationSet& obs) {
  obs.validate();
  return estimates_impl(obs.x1, obs.x2, false, params.support.t1,
                        params.support.t2, params.rho, obs.noise.sigma1,
                        obs.noise.sigma2);
}

double sure(const RuleParams& params, const ObservationSet& obs) {
  obs.validate();
  return sure_impl(obs.x1, obs.x2, false, params.support.t1, params.support.t2,
                   params.rho, obs.noise.sigma1, obs.noise.sigma2);
}

std::vector<double> apply_rule_1d(std::span<const double> support1, double rho,
                                  std::span<const double> x1, double sigma1) {
  return estimates_impl(x1, {}, true, support1, {}, rho, sigma1, 1.0);
}

double sure_1d(std::span<const double> support1, double rho,
               std::span<const double> x1, double sigma1) {
  return sure_impl(x1, {}, true, support1, {}, rho, sigma1, 1.0);
}

FitResult fit_integrative(const ObservationSet& obs, const FitConfig& config) {
  obs.validate();
  if (obs.noise.rho_corr != 0.0) {
    throw std::invalid_argument("ref::fit_integrative requires independent noise");
  }
  return descent_impl(obs.x1, obs.x2, false, obs.noise.sigma1,
                      obs.noise.sigma2, config);
}

FitResult fit_univariate(std::span<const double> x1, double sigma1,
                         const FitConfig& config) {
  return descent_impl(x1, {}, true, sigma1, 1.0, config);
}

}  // namespace ebmeans::ref
