#ifndef EBMEANS_RISK_HPP
#define EBMEANS_RISK_HPP

#include <span>
#include <vector>

#include "ebmeans/oracle.hpp"

namespace ebmeans {

// Candidate support points indexing the separable rule family. t1/t2 have one
// entry per observation of the associated ObservationSet.
struct SupportVector {
  std::vector<double> t1;
  std::vector<double> t2;
};

struct RuleParams {
  SupportVector support;
  double rho = 0.0;
};

// The separable shrinkage rule
//   estimate_i = x1_i + sum_j (t1_j - x1_i) k_ij / (rho + sum_j k_ij)
// with k_ij the independent bivariate kernel at support point j. All kernel
// arithmetic runs in log space with per-observation max shifts; when rho = 0
// and every kernel for some i underflows, that estimate falls back to x1_i.
std::vector<double> apply_rule(const RuleParams& params,
                               const ObservationSet& obs);

// Unbiased estimate of the rule's risk, evaluated from the same
// per-observation kernel sums as apply_rule. Degenerate denominators (see
// apply_rule) contribute zero ratio terms.
double sure(const RuleParams& params, const ObservationSet& obs);

// Realized loss (1/n) sum_i (theta1_i - estimate_i)^2 at the rule's estimates.
double loss(const RuleParams& params, const ObservationSet& obs,
            std::span<const double> theta1);

// One-sequence versions of the rule and its risk estimate.
std::vector<double> apply_rule_1d(std::span<const double> support1, double rho,
                                  std::span<const double> x1, double sigma1);
double sure_1d(std::span<const double> support1, double rho,
               std::span<const double> x1, double sigma1);

// Mean squared error of precomputed estimates. Shared loss convention for
// the simulation harness.
double mean_squared_error(std::span<const double> estimates,
                          std::span<const double> theta1);

// Estimates and risk estimate from one pass of kernel accumulators.
// denominator_underflow reports the rho = 0 degenerate fallback.
struct RuleEvaluation {
  std::vector<double> estimates;
  double sure_value = 0.0;
  bool denominator_underflow = false;
};
RuleEvaluation evaluate_rule(const RuleParams& params,
                             const ObservationSet& obs);

}  // namespace ebmeans

#endif
