#include "ebmeans/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "sure_engine.hpp"

namespace ebmeans {

namespace {

void validate_rule(const RuleParams& params, std::size_t n, bool univariate) {
  if (params.support.t1.size() != n ||
      (!univariate && params.support.t2.size() != n)) {
    throw std::invalid_argument("RuleParams: support length mismatch");
  }
  if (!(params.rho >= 0.0) || !std::isfinite(params.rho)) {
    throw std::invalid_argument("RuleParams: rho must be finite and >= 0");
  }
  for (double t : params.support.t1) {
    if (!std::isfinite(t)) throw std::invalid_argument("RuleParams: non-finite t1");
  }
  if (!univariate) {
    for (double t : params.support.t2) {
      if (!std::isfinite(t)) throw std::invalid_argument("RuleParams: non-finite t2");
    }
  }
}

detail::SureEngine make_engine(const RuleParams& params,
                               const ObservationSet& obs) {
  obs.validate();
  if (obs.noise.rho_corr != 0.0) {
    throw std::invalid_argument("separable rule family requires independent noise");
  }
  validate_rule(params, obs.x1.size(), /*univariate=*/false);
  detail::SureEngine engine(obs.x1, obs.x2, obs.noise.sigma1, obs.noise.sigma2,
                            params.rho);
  engine.set_support(params.support.t1, params.support.t2);
  engine.rebuild();
  return engine;
}

detail::SureEngine make_engine_1d(std::span<const double> support1, double rho,
                                  std::span<const double> x1, double sigma1) {
  if (x1.empty() || support1.size() != x1.size()) {
    throw std::invalid_argument("1d rule: support/observation length mismatch");
  }
  for (double v : x1) {
    if (!std::isfinite(v)) throw std::invalid_argument("1d rule: non-finite x1");
  }
  for (double t : support1) {
    if (!std::isfinite(t)) throw std::invalid_argument("1d rule: non-finite support");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("1d rule: rho must be finite and >= 0");
  }
  detail::SureEngine engine(x1, {}, sigma1, 1.0, rho);
  engine.set_support({support1.begin(), support1.end()}, {});
  engine.rebuild();
  return engine;
}

}  // namespace

std::vector<double> apply_rule(const RuleParams& params,
                               const ObservationSet& obs) {
  return make_engine(params, obs).estimates();
}

double sure(const RuleParams& params, const ObservationSet& obs) {
  return make_engine(params, obs).sure_value();
}

double loss(const RuleParams& params, const ObservationSet& obs,
            std::span<const double> theta1) {
  if (theta1.size() != obs.x1.size()) {
    throw std::invalid_argument("loss: theta1 length mismatch");
  }
  return mean_squared_error(apply_rule(params, obs), theta1);
}

std::vector<double> apply_rule_1d(std::span<const double> support1, double rho,
                                  std::span<const double> x1, double sigma1) {
  return make_engine_1d(support1, rho, x1, sigma1).estimates();
}

double sure_1d(std::span<const double> support1, double rho,
               std::span<const double> x1, double sigma1) {
  return make_engine_1d(support1, rho, x1, sigma1).sure_value();
}

RuleEvaluation evaluate_rule(const RuleParams& params,
                             const ObservationSet& obs) {
  detail::SureEngine engine = make_engine(params, obs);
  RuleEvaluation out;
  out.estimates = engine.estimates();
  out.sure_value = engine.sure_value();
  out.denominator_underflow = engine.underflow_seen();
  return out;
}

double mean_squared_error(std::span<const double> estimates,
                          std::span<const double> theta1) {
  if (estimates.size() != theta1.size() || estimates.empty()) {
    throw std::invalid_argument("mean_squared_error: length mismatch");
  }
  std::vector<double> sq(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double d = theta1[i] - estimates[i];
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(estimates.size());
}

}  // namespace ebmeans
