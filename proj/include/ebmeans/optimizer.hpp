#ifndef EBMEANS_OPTIMIZER_HPP
#define EBMEANS_OPTIMIZER_HPP

#include <span>
#include <vector>

#include "ebmeans/risk.hpp"

namespace ebmeans {

struct FitConfig {
  double rho = 0.0;
  double box_halfwidth_m = 5.0;        // M: candidate box is [x - M s, x + M s]
  int candidates_k = 10;               // K: grid points per coordinate
  double tol_epsilon = 1e-5;           // per-sweep SURE change threshold
  int max_sweeps = 100;
  double underflow_fallback_rho = 1e-12;

  void validate() const;
};

struct FitResult {
  SupportVector support;               // fitted t
  std::vector<double> estimates;       // rule applied to the data at t
  double sure_value = 0.0;
  int sweeps_used = 0;
  std::vector<double> sure_trace;      // SURE after each sweep; non-increasing
  bool converged = false;
  // a denominator underflowed outright with rho == 0 (callers may refit with
  // underflow_fallback_rho)
  bool underflow_detected = false;
};

// K equally spaced candidate values spanning [x - M sigma, x + M sigma],
// both endpoints included.
std::vector<double> candidate_grid(double x, double sigma,
                                   const FitConfig& config);

// Coordinate-descent minimization of the unbiased risk estimate over the
// per-coordinate candidate boxes. Support starts at the observations; the
// coordinates t_11..t_n1, t_12..t_n2 are swept in order, each set to the best
// of {current value} + candidate_grid. The incumbent always competes, so the
// risk estimate never increases; ties prefer the candidate closest to the
// observation, then the smaller value.
FitResult fit_integrative(const ObservationSet& obs, const FitConfig& config);

// One-sequence variant: coordinates t_11..t_n1 only.
FitResult fit_univariate(std::span<const double> x1, double sigma1,
                         const FitConfig& config);

}  // namespace ebmeans

#endif
