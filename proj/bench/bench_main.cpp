#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ebmeans/optimizer.hpp"
#include "ebmeans/reference.hpp"
#include "ebmeans/risk.hpp"

using namespace ebmeans;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ObservationSet make_observations(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> theta(0.0, 1.0), noise(0.0, 1.0);
  ObservationSet obs;
  obs.noise = NoiseSpec{1.0, 1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = theta(rng);
    obs.x1.push_back(t + noise(rng));
    obs.x2.push_back(2.0 * t * t + noise(rng));
  }
  return obs;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    f();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

}  // namespace

int main() {
  std::mt19937_64 rng(1234);
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("risk-estimate evaluation (one pass over the support)\n");
  std::printf("%8s %14s %14s %10s\n", "n", "reference (s)", "engine (s)",
              "speedup");
  for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
    ObservationSet obs = make_observations(n, rng);
    RuleParams params{SupportVector{obs.x1, obs.x2}, 0.0};
    volatile double sink = 0.0;
    const double t_ref =
        time_best_of(3, [&] { sink = ref::sure(params, obs); });
    const double t_eng = time_best_of(3, [&] { sink = sure(params, obs); });
    (void)sink;
    std::printf("%8zu %14.6f %14.6f %9.2fx\n", n, t_ref, t_eng, t_ref / t_eng);
  }

  std::printf("\ncoordinate descent, one-sequence fit (K = 10)\n");
  std::printf("%8s %14s %14s %10s\n", "n", "rescoring (s)", "incremental (s)",
              "speedup");
  FitConfig config;
  for (std::size_t n : {50u, 100u, 200u}) {
    ObservationSet obs = make_observations(n, rng);
    const double t_ref = time_best_of(
        1, [&] { (void)ref::fit_univariate(obs.x1, 1.0, config); });
    const double t_inc =
        time_best_of(1, [&] { (void)fit_univariate(obs.x1, 1.0, config); });
    std::printf("%8zu %14.4f %14.4f %9.1fx\n", n, t_ref, t_inc, t_ref / t_inc);
  }

  std::printf("\nincremental integrative fit, n = 1000 (K = 10)\n");
  ObservationSet big = make_observations(1000, rng);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const auto start = Clock::now();
    const FitResult fit = fit_integrative(big, config);
    std::printf("  threads=%d: %.3fs (%d sweeps, final risk estimate %.6f)\n",
                threads, seconds_since(start), fit.sweeps_used,
                fit.sure_value);
  }
  return 0;
}
