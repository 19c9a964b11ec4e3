#ifndef EBMEANS_SIMULATE_HPP
#define EBMEANS_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ebmeans/optimizer.hpp"
#include "ebmeans/oracle.hpp"

namespace ebmeans {

enum class Theta1Config { normal01, uniform_m2_2, exp1, sparse };
enum class Theta2Config { strong, weak, none };

Theta1Config theta1_config_from_string(const std::string& s);
Theta2Config theta2_config_from_string(const std::string& s);
std::string to_string(Theta1Config c);
std::string to_string(Theta2Config c);

// One simulation scenario. Means are a pure function of mean_seed and stay
// fixed across replications; replication r draws its noise from streams keyed
// by (replication_seed_base, r, i, d).
struct ScenarioSpec {
  int n = 1000;
  Theta1Config theta1_config = Theta1Config::normal01;
  int sparse_count = 0;        // used by Theta1Config::sparse
  double sparse_value = 1.5;   // used by Theta1Config::sparse
  Theta2Config theta2_config = Theta2Config::strong;
  NoiseSpec noise;
  std::uint64_t mean_seed = 1;
  std::uint64_t replication_seed_base = 2;

  void validate() const;
  std::string label() const;  // compact id used in CSV output
};

struct ReplicationReport {
  std::string method;
  std::vector<double> losses;  // one per replication, in replication order
  double mean_loss = 0.0;
  double standard_error = 0.0;  // sample SD / sqrt(R)
  int replications = 0;
};

MeanSet generate_means(const ScenarioSpec& spec);

ObservationSet generate_observations(const MeanSet& means,
                                     const NoiseSpec& noise,
                                     int replication_index,
                                     const ScenarioSpec& spec);

// Known method identifiers: mle, oracle_integrative, oracle_univariate,
// oracle_correlated, fit_integrative, fit_univariate. Every method sees the
// same R observation sets; reports come back sorted by method name.
std::vector<ReplicationReport> run_replications(
    const ScenarioSpec& spec, const std::vector<std::string>& methods, int R,
    const FitConfig& config = FitConfig{});

// Sparse one-sequence experiment: n = 1000 means equal to mu on
// `nonzero_count` coordinates and zero elsewhere, fit_univariate per
// replication, averaged TOTAL squared error (not per-coordinate).
// per_replication, when given, receives the R individual totals.
double table1_experiment(double mu, int nonzero_count, int R,
                         const FitConfig& config,
                         std::uint64_t replication_seed_base = 2,
                         std::vector<double>* per_replication = nullptr);

}  // namespace ebmeans

#endif
