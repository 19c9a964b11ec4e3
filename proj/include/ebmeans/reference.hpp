#ifndef EBMEANS_REFERENCE_HPP
#define EBMEANS_REFERENCE_HPP

#include <span>
#include <vector>

#include "ebmeans/optimizer.hpp"
#include "ebmeans/risk.hpp"

// Serial reference implementations: straightforward per-observation
// log-sum-exp evaluation of the rule family and its risk estimate, plus a
// coordinate descent that rescores every candidate from scratch. No
// incremental accumulators, no OpenMP. These are the comparison baseline for
// the optimized paths in tests and benchmarks; they are O(n^2) per risk
// evaluation and O(n^2 K) per coordinate update, so keep n small.
namespace ebmeans::ref {

std::vector<double> apply_rule(const RuleParams& params,
                               const ObservationSet& obs);
double sure(const RuleParams& params, const ObservationSet& obs);

std::vector<double> apply_rule_1d(std::span<const double> support1, double rho,
                                  std::span<const double> x1, double sigma1);
double sure_1d(std::span<const double> support1, double rho,
               std::span<const double> x1, double sigma1);

FitResult fit_integrative(const ObservationSet& obs, const FitConfig& config);
FitResult fit_univariate(std::span<const double> x1, double sigma1,
                         const FitConfig& config);

}  // namespace ebmeans::ref

#endif
