#include "ebmeans/optimizer.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sure_engine.hpp"

namespace ebmeans {

void FitConfig::validate() const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("FitConfig: rho must be finite and >= 0");
  }
  if (!(box_halfwidth_m > 0.0)) {
    throw std::invalid_argument("FitConfig: box_halfwidth_m must be positive");
  }
  if (candidates_k < 2) {
    throw std::invalid_argument("FitConfig: candidates_k must be >= 2");
  }
  if (!(tol_epsilon > 0.0)) {
    throw std::invalid_argument("FitConfig: tol_epsilon must be positive");
  }
  if (max_sweeps < 1) {
    throw std::invalid_argument("FitConfig: max_sweeps must be >= 1");
  }
  if (!(underflow_fallback_rho > 0.0)) {
    throw std::invalid_argument("FitConfig: underflow_fallback_rho must be positive");
  }
}

std::vector<double> candidate_grid(double x, double sigma,
                                   const FitConfig& config) {
  config.validate();
  const int k = config.candidates_k;
  const double lo = x - config.box_halfwidth_m * sigma;
  const double hi = x + config.box_halfwidth_m * sigma;
  const double step = (hi - lo) / static_cast<double>(k - 1);
  std::vector<double> grid(k);
  for (int i = 0; i < k; ++i) grid[i] = lo + step * i;
  grid.back() = hi;
  return grid;
}

namespace {

struct Candidate {
  double value;
  double score;
  double dist;  // |value - x_jd|
};

// Lexicographic (score, dist, value) preference.
bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.dist != b.dist) return a.dist < b.dist;
  return a.value < b.value;
}

// Shared sweep loop. dims lists the coordinate groups in update order:
// {1} for the univariate fit, {1, 2} for the integrative fit. xd(d)[j] is
// the observation the grid for coordinate (j, d) is centered on.
FitResult run_descent(detail::SureEngine& engine, const FitConfig& config,
                      std::span<const int> dims,
                      std::span<const double> x1d, std::span<const double> x2d,
                      double sigma1, double sigma2) {
  const std::size_t n = engine.size();
  engine.rebuild();
  double cur = engine.sure_value();
  double prev_sweep = cur;

  FitResult result;
  const int max_threads = omp_get_max_threads();
  std::vector<std::vector<double>> scratch(max_threads);
  std::vector<double> scores(config.candidates_k);
  std::size_t visits_since_rebuild = 0;

  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    for (int dim : dims) {
      const std::span<const double> xd = (dim == 1) ? x1d : x2d;
      const double sigma = (dim == 1) ? sigma1 : sigma2;
      for (std::size_t j = 0; j < n; ++j) {
        engine.begin_coordinate(j, dim);
        const std::vector<double> grid = candidate_grid(xd[j], sigma, config);
        const int k = config.candidates_k;
#pragma omp parallel for schedule(static)
        for (int c = 0; c < k; ++c) {
          scores[c] = engine.score_candidate(grid[c], scratch[omp_get_thread_num()]);
        }
        const double t_cur = (dim == 1) ? engine.t1()[j] : engine.t2()[j];
        // the incumbent competes at the running value of the risk estimate,
        // which makes the committed sequence non-increasing by construction
        Candidate best{t_cur, cur, std::abs(t_cur - xd[j])};
        for (int c = 0; c < k; ++c) {
          Candidate cand{grid[c], scores[c], std::abs(grid[c] - xd[j])};
          if (better(cand, best)) best = cand;
        }
        if (best.value != t_cur) {
          engine.commit_candidate(best.value);
          cur = best.score;
        }
        if (++visits_since_rebuild >= n) {
          // periodic full recompute bounds incremental roundoff drift
          engine.rebuild();
          cur = std::min(cur, engine.sure_value());
          visits_since_rebuild = 0;
        }
      }
    }
    if (visits_since_rebuild != 0) {
      engine.rebuild();
      cur = std::min(cur, engine.sure_value());
      visits_since_rebuild = 0;
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
  result.support.t1 = engine.t1();
  result.support.t2 = engine.t2();
  result.underflow_detected = engine.underflow_seen();
  return result;
}

}  // namespace

FitResult fit_integrative(const ObservationSet& obs, const FitConfig& config) {
  config.validate();
  obs.validate();
  if (obs.noise.rho_corr != 0.0) {
    throw std::invalid_argument("fit_integrative requires independent noise");
  }
  detail::SureEngine engine(obs.x1, obs.x2, obs.noise.sigma1, obs.noise.sigma2,
                            config.rho);
  engine.set_support(obs.x1, obs.x2);  // t starts at the observations
  const int dims[] = {1, 2};
  FitResult result = run_descent(engine, config, dims, obs.x1, obs.x2,
                                 obs.noise.sigma1, obs.noise.sigma2);
  result.estimates =
      apply_rule(RuleParams{result.support, config.rho}, obs);
  return result;
}

FitResult fit_univariate(std::span<const double> x1, double sigma1,
                         const FitConfig& config) {
  config.validate();
  if (x1.empty()) throw std::invalid_argument("fit_univariate: empty input");
  if (!(sigma1 > 0.0)) {
    throw std::invalid_argument("fit_univariate: sigma1 must be positive");
  }
  for (double v : x1) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("fit_univariate: non-finite x1");
    }
  }
  detail::SureEngine engine(x1, {}, sigma1, 1.0, config.rho);
  engine.set_support({x1.begin(), x1.end()}, {});
  const int dims[] = {1};
  FitResult result =
      run_descent(engine, config, dims, x1, {}, sigma1, 1.0);
  result.estimates =
      apply_rule_1d(result.support.t1, config.rho, x1, sigma1);
  return result;
}

}  // namespace ebmeans
