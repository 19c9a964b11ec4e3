#include "ebmeans/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ebmeans/rng.hpp"

namespace ebmeans {

namespace {

// stream tags: every random quantity has its own keyed stream
constexpr std::uint64_t kStreamMeansTheta = 0x11;
constexpr std::uint64_t kStreamMeansAux = 0x12;
constexpr std::uint64_t kStreamNoise = 0x21;

double sample_theta1(Theta1Config config, StreamRng& rng) {
  switch (config) {
    case Theta1Config::normal01:
      return rng.normal();
    case Theta1Config::uniform_m2_2:
      return rng.uniform(-2.0, 2.0);
    case Theta1Config::exp1:
      return rng.exponential();
    case Theta1Config::sparse:
      return 0.0;  // handled by the caller
  }
  throw std::invalid_argument("unknown theta1 config");
}

void summarize(ReplicationReport& report) {
  const int r = static_cast<int>(report.losses.size());
  report.replications = r;
  double mean = 0.0;
  for (double l : report.losses) mean += l;
  mean /= r;
  report.mean_loss = mean;
  if (r > 1) {
    double ss = 0.0;
    for (double l : report.losses) ss += (l - mean) * (l - mean);
    report.standard_error = std::sqrt(ss / (r - 1)) / std::sqrt(static_cast<double>(r));
  } else {
    report.standard_error = 0.0;
  }
}

}  // namespace

Theta1Config theta1_config_from_string(const std::string& s) {
  if (s == "normal01") return Theta1Config::normal01;
  if (s == "uniform") return Theta1Config::uniform_m2_2;
  if (s == "exp1") return Theta1Config::exp1;
  if (s == "sparse") return Theta1Config::sparse;
  throw std::invalid_argument("unknown theta1 config: " + s);
}

Theta2Config theta2_config_from_string(const std::string& s) {
  if (s == "strong") return Theta2Config::strong;
  if (s == "weak") return Theta2Config::weak;
  if (s == "none") return Theta2Config::none;
  throw std::invalid_argument("unknown theta2 config: " + s);
}

std::string to_string(Theta1Config c) {
  switch (c) {
    case Theta1Config::normal01: return "normal01";
    case Theta1Config::uniform_m2_2: return "uniform";
    case Theta1Config::exp1: return "exp1";
    case Theta1Config::sparse: return "sparse";
  }
  return "?";
}

std::string to_string(Theta2Config c) {
  switch (c) {
    case Theta2Config::strong: return "strong";
    case Theta2Config::weak: return "weak";
    case Theta2Config::none: return "none";
  }
  return "?";
}

void ScenarioSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ScenarioSpec: n must be >= 1");
  noise.validate();
  if (theta1_config == Theta1Config::sparse) {
    if (sparse_count < 0 || sparse_count > n) {
      throw std::invalid_argument("ScenarioSpec: sparse_count must lie in [0, n]");
    }
    if (!std::isfinite(sparse_value)) {
      throw std::invalid_argument("ScenarioSpec: sparse_value must be finite");
    }
  }
}

std::string ScenarioSpec::label() const {
  std::ostringstream out;
  out << "n" << n << "_" << to_string(theta1_config) << "_"
      << to_string(theta2_config) << "_r" << noise.rho_corr;
  return out.str();
}

MeanSet generate_means(const ScenarioSpec& spec) {
  spec.validate();
  MeanSet means;
  means.theta1.resize(spec.n);
  means.theta2.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    double th1;
    if (spec.theta1_config == Theta1Config::sparse) {
      th1 = i < spec.sparse_count ? spec.sparse_value : 0.0;
    } else {
      StreamRng rng{kStreamMeansTheta, spec.mean_seed,
                    static_cast<std::uint64_t>(i)};
      th1 = sample_theta1(spec.theta1_config, rng);
    }
    double th2;
    if (spec.theta2_config == Theta2Config::strong) {
      th2 = 2.0 * th1 * th1;
    } else {
      StreamRng aux{kStreamMeansAux, spec.mean_seed,
                    static_cast<std::uint64_t>(i)};
      const double e = aux.uniform(-4.0, 4.0);
      th2 = spec.theta2_config == Theta2Config::weak ? th1 * th1 + e : e;
    }
    means.theta1[i] = th1;
    means.theta2[i] = th2;
  }
  return means;
}

ObservationSet generate_observations(const MeanSet& means,
                                     const NoiseSpec& noise,
                                     int replication_index,
                                     const ScenarioSpec& spec) {
  means.validate();
  noise.validate();
  const std::size_t n = means.theta1.size();
  ObservationSet obs;
  obs.noise = noise;
  obs.x1.resize(n);
  obs.x2.resize(n);
  const double r = noise.rho_corr;
  const double mix = std::sqrt(1.0 - r * r);
  for (std::size_t i = 0; i < n; ++i) {
    StreamRng s1{kStreamNoise, spec.replication_seed_base,
                 static_cast<std::uint64_t>(replication_index),
                 static_cast<std::uint64_t>(i), 1};
    StreamRng s2{kStreamNoise, spec.replication_seed_base,
                 static_cast<std::uint64_t>(replication_index),
                 static_cast<std::uint64_t>(i), 2};
    const double z1 = s1.normal();
    const double z2 = s2.normal();
    obs.x1[i] = means.theta1[i] + noise.sigma1 * z1;
    obs.x2[i] = means.theta2[i] + noise.sigma2 * (r * z1 + mix * z2);
  }
  return obs;
}

std::vector<ReplicationReport> run_replications(
    const ScenarioSpec& spec, const std::vector<std::string>& methods, int R,
    const FitConfig& config) {
  spec.validate();
  config.validate();
  if (R < 1) throw std::invalid_argument("run_replications: R must be >= 1");
  static const std::vector<std::string> known = {
      "mle",           "oracle_integrative", "oracle_univariate",
      "oracle_correlated", "fit_integrative",    "fit_univariate"};
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw std::invalid_argument("run_replications: unknown method " + m);
    }
  }

  const MeanSet means = generate_means(spec);
  std::vector<ReplicationReport> reports(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    reports[m].method = methods[m];
    reports[m].losses.reserve(R);
  }

  for (int rep = 0; rep < R; ++rep) {
    const ObservationSet obs =
        generate_observations(means, spec.noise, rep, spec);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<double> est;
      const std::string& name = methods[m];
      if (name == "mle") {
        est = obs.x1;
      } else if (name == "oracle_integrative") {
        est = oracle_integrative(obs, means);
      } else if (name == "oracle_univariate") {
        est = oracle_univariate(obs.x1, means.theta1, obs.noise.sigma1);
      } else if (name == "oracle_correlated") {
        est = oracle_correlated(obs, means);
      } else if (name == "fit_integrative") {
        est = fit_integrative(obs, config).estimates;
      } else {
        est = fit_univariate(obs.x1, obs.noise.sigma1, config).estimates;
      }
      reports[m].losses.push_back(mean_squared_error(est, means.theta1));
    }
  }

  for (auto& report : reports) summarize(report);
  std::sort(reports.begin(), reports.end(),
            [](const auto& a, const auto& b) { return a.method < b.method; });
  return reports;
}

double table1_experiment(double mu, int nonzero_count, int R,
                         const FitConfig& config,
                         std::uint64_t replication_seed_base,
                         std::vector<double>* per_replication) {
  config.validate();
  constexpr int n = 1000;
  if (nonzero_count < 0 || nonzero_count > n) {
    throw std::invalid_argument("table1_experiment: nonzero_count out of range");
  }
  if (R < 1) throw std::invalid_argument("table1_experiment: R must be >= 1");
  std::vector<double> theta(n, 0.0);
  for (int i = 0; i < nonzero_count; ++i) theta[i] = mu;

  if (per_replication) per_replication->clear();
  double total = 0.0;
  for (int rep = 0; rep < R; ++rep) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
      StreamRng s{kStreamNoise, replication_seed_base,
                  static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(i),
                  1};
      x[i] = theta[i] + s.normal();
    }
    const FitResult fit = fit_univariate(x, 1.0, config);
    const double err = n * mean_squared_error(fit.estimates, theta);
    if (per_replication) per_replication->push_back(err);
    total += err;
  }
  return total / R;
}

}  // namespace ebmeans
