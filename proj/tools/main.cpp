#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebmeans/classify.hpp"
#include "ebmeans/csv.hpp"
#include "ebmeans/optimizer.hpp"
#include "ebmeans/oracle.hpp"
#include "ebmeans/risk.hpp"
#include "ebmeans/simulate.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ebmeans;

namespace {

struct FitFlags {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;
  double m = 5.0;
  int k = 10;
  double epsilon = 1e-5;
  int max_sweeps = 100;
  int threads = 0;
  std::string out = ".";

  FitConfig config() const {
    FitConfig cfg;
    cfg.rho = rho;
    cfg.box_halfwidth_m = m;
    cfg.candidates_k = k;
    cfg.tol_epsilon = epsilon;
    cfg.max_sweeps = max_sweeps;
    return cfg;
  }

  json config_json() const {
    return {{"sigma1", sigma1}, {"sigma2", sigma2},     {"rho", rho},
            {"m", m},           {"k", k},               {"epsilon", epsilon},
            {"max_sweeps", max_sweeps}, {"threads", threads}};
  }
};

void add_fit_flags(CLI::App* cmd, FitFlags& f, bool with_sigma2) {
  cmd->add_option("--sigma1", f.sigma1, "primary noise SD");
  if (with_sigma2) cmd->add_option("--sigma2", f.sigma2, "auxiliary noise SD");
  cmd->add_option("--rho", f.rho, "denominator regularizer");
  cmd->add_option("--m", f.m, "candidate box halfwidth in noise SDs");
  cmd->add_option("--k", f.k, "candidates per coordinate");
  cmd->add_option("--epsilon", f.epsilon, "per-sweep convergence threshold");
  cmd->add_option("--max-sweeps", f.max_sweeps, "sweep cap");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0 = runtime default)");
  cmd->add_option("--out", f.out, "output directory");
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

struct LoadedObservations {
  std::vector<long> index;
  std::vector<double> x1;
  std::vector<double> x2;
  bool has_x2 = false;
};

LoadedObservations load_observations(const std::string& path, bool need_x2) {
  const csv::Table table = csv::read_file(path);
  LoadedObservations out;
  const std::size_t ix = table.column("index");
  const std::size_t c1 = table.column("x1");
  out.has_x2 = table.has_column("x2");
  if (need_x2 && !out.has_x2) {
    throw std::invalid_argument(path + ": column 'x2' is required here");
  }
  const std::size_t c2 = out.has_x2 ? table.column("x2") : 0;
  for (const auto& row : table.rows) {
    out.index.push_back(csv::parse_long(row[ix], path));
    out.x1.push_back(csv::parse_double(row[c1], path));
    if (out.has_x2) out.x2.push_back(csv::parse_double(row[c2], path));
  }
  if (out.x1.empty()) throw std::invalid_argument(path + ": no data rows");
  return out;
}

SupportVector load_support(const std::string& path, bool need_t2) {
  const csv::Table table = csv::read_file(path);
  SupportVector support;
  // an observations file (index,x1,x2) is accepted as a support file too
  const bool obs_style = !table.has_column("t1") && table.has_column("x1");
  const std::size_t c1 = table.column(obs_style ? "x1" : "t1");
  const char* name2 = obs_style ? "x2" : "t2";
  if (need_t2 && !table.has_column(name2)) {
    throw std::invalid_argument(path + ": second support column is required");
  }
  const std::size_t c2 = table.has_column(name2) ? table.column(name2) : 0;
  const bool has2 = table.has_column(name2);
  for (const auto& row : table.rows) {
    support.t1.push_back(csv::parse_double(row[c1], path));
    if (has2) support.t2.push_back(csv::parse_double(row[c2], path));
  }
  return support;
}

MeanSet load_means(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  MeanSet means;
  const std::size_t c1 = table.column("theta1");
  const bool has2 = table.has_column("theta2");
  for (const auto& row : table.rows) {
    means.theta1.push_back(csv::parse_double(row[c1], path));
    means.theta2.push_back(has2 ? csv::parse_double(row[table.column("theta2")], path)
                                : 0.0);
  }
  return means;
}

ExpressionDataset load_expression(const std::string& matrix_path,
                                  const std::string& labels_path) {
  const csv::Table m = csv::read_file(matrix_path);
  if (m.header.empty() || m.header[0] != "gene_id") {
    throw std::invalid_argument(matrix_path + ": first column must be gene_id");
  }
  const csv::Table l = csv::read_file(labels_path);
  const std::size_t sid = l.column("sample_id");
  const std::size_t lab = l.column("label");
  std::unordered_map<std::string, int> label_of;
  for (const auto& row : l.rows) {
    label_of[row[sid]] = static_cast<int>(csv::parse_long(row[lab], labels_path));
  }
  ExpressionDataset data;
  for (std::size_t c = 1; c < m.header.size(); ++c) {
    const auto it = label_of.find(m.header[c]);
    if (it == label_of.end()) {
      throw std::invalid_argument("sample " + m.header[c] + " missing from " +
                                  labels_path);
    }
    data.labels.push_back(it->second);
  }
  for (const auto& row : m.rows) {
    data.gene_ids.push_back(row[0]);
    std::vector<double> values;
    for (std::size_t c = 1; c < row.size(); ++c) {
      values.push_back(csv::parse_double(row[c], matrix_path));
    }
    data.matrix.push_back(std::move(values));
  }
  return data;
}

std::unordered_map<std::string, double> load_aux(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const std::size_t gid = table.column("gene_id");
  const std::size_t zc = table.column("z");
  std::unordered_map<std::string, double> aux;
  for (const auto& row : table.rows) {
    aux[row[gid]] = csv::parse_double(row[zc], path);
  }
  return aux;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- estimate

int run_estimate(const std::string& input, const FitFlags& flags, bool two_d) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);
  const LoadedObservations loaded = load_observations(input, two_d);

  FitConfig cfg = flags.config();
  FitResult fit;
  if (two_d) {
    ObservationSet obs{loaded.x1, loaded.x2,
                       NoiseSpec{flags.sigma1, flags.sigma2, 0.0}};
    fit = fit_integrative(obs, cfg);
    if (fit.underflow_detected && cfg.rho == 0.0) {
      cfg.rho = cfg.underflow_fallback_rho;
      fit = fit_integrative(obs, cfg);
    }
  } else {
    fit = fit_univariate(loaded.x1, flags.sigma1, cfg);
    if (fit.underflow_detected && cfg.rho == 0.0) {
      cfg.rho = cfg.underflow_fallback_rho;
      fit = fit_univariate(loaded.x1, flags.sigma1, cfg);
    }
  }

  csv::Writer w((dir / "estimates.csv").string());
  if (two_d) {
    w.row({"index", "x1", "x2", "t1_hat", "t2_hat", "estimate"});
  } else {
    w.row({"index", "x1", "t1_hat", "estimate"});
  }
  for (std::size_t i = 0; i < loaded.x1.size(); ++i) {
    std::vector<std::string> cells{std::to_string(loaded.index[i]),
                                   csv::format_double(loaded.x1[i])};
    if (two_d) cells.push_back(csv::format_double(loaded.x2[i]));
    cells.push_back(csv::format_double(fit.support.t1[i]));
    if (two_d) cells.push_back(csv::format_double(fit.support.t2[i]));
    cells.push_back(csv::format_double(fit.estimates[i]));
    w.row(cells);
  }

  write_json(dir / "summary.json",
             {{"sure_value", fit.sure_value},
              {"sweeps_used", fit.sweeps_used},
              {"converged", fit.converged},
              {"rho_used", cfg.rho},
              {"underflow_fallback", cfg.rho != flags.rho}});

  tools::RunManifest manifest;
  manifest.subcommand = two_d ? "estimate" : "estimate-1d";
  manifest.config = flags.config_json();
  manifest.input_paths = {input};
  manifest.write(dir);
  return 0;
}

// ------------------------------------------------------------------ oracle

int run_oracle(const std::string& input, const std::string& means_path,
               const std::string& rule, double corr, double rho,
               const FitFlags& flags) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);
  const LoadedObservations loaded =
      load_observations(input, rule != "univariate");
  const MeanSet means = load_means(means_path);

  std::vector<double> est;
  if (rule == "univariate") {
    est = oracle_univariate(loaded.x1, means.theta1, flags.sigma1);
  } else {
    ObservationSet obs{loaded.x1, loaded.x2,
                       NoiseSpec{flags.sigma1, flags.sigma2,
                                 rule == "correlated" ? corr : 0.0}};
    if (rule == "integrative") {
      est = oracle_integrative(obs, means);
    } else if (rule == "regularized") {
      est = oracle_regularized(obs, means, rho);
    } else if (rule == "correlated") {
      est = oracle_correlated(obs, means);
    } else {
      throw std::invalid_argument("unknown oracle rule: " + rule);
    }
  }

  csv::Writer w((dir / "estimates.csv").string());
  w.row({"index", "estimate"});
  for (std::size_t i = 0; i < est.size(); ++i) {
    w.row({std::to_string(loaded.index[i]), csv::format_double(est[i])});
  }

  tools::RunManifest manifest;
  manifest.subcommand = "oracle";
  manifest.config = {{"rule", rule},         {"rho", rho},
                     {"corr", corr},         {"sigma1", flags.sigma1},
                     {"sigma2", flags.sigma2}};
  manifest.input_paths = {input, means_path};
  manifest.write(dir);
  return 0;
}

// -------------------------------------------------------------------- sure

int run_sure(const std::string& input, const std::string& support_path,
             double rho, const FitFlags& flags) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);
  const LoadedObservations loaded = load_observations(input, true);
  SupportVector support = load_support(support_path, true);

  ObservationSet obs{loaded.x1, loaded.x2,
                     NoiseSpec{flags.sigma1, flags.sigma2, 0.0}};
  double rho_used = rho;
  RuleEvaluation eval = evaluate_rule(RuleParams{support, rho}, obs);
  if (eval.denominator_underflow && rho == 0.0) {
    rho_used = FitConfig{}.underflow_fallback_rho;
    eval = evaluate_rule(RuleParams{std::move(support), rho_used}, obs);
  }

  std::cout << csv::format_double(eval.sure_value) << '\n';

  csv::Writer w((dir / "estimates.csv").string());
  w.row({"index", "estimate"});
  for (std::size_t i = 0; i < eval.estimates.size(); ++i) {
    w.row({std::to_string(loaded.index[i]),
           csv::format_double(eval.estimates[i])});
  }
  write_json(dir / "summary.json",
             {{"sure_value", eval.sure_value}, {"rho_used", rho_used}});

  tools::RunManifest manifest;
  manifest.subcommand = "sure";
  manifest.config = {{"rho", rho},
                     {"sigma1", flags.sigma1},
                     {"sigma2", flags.sigma2}};
  manifest.input_paths = {input, support_path};
  manifest.write(dir);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimFlags {
  int n = 1000;
  std::string theta1 = "normal01";
  int sparse_count = 100;
  double sparse_value = 1.5;
  std::string theta2 = "strong";
  double corr = 0.0;
  int reps = 200;
  std::vector<std::string> methods = {"mle", "oracle_integrative",
                                      "oracle_univariate"};
  std::uint64_t mean_seed = 1;
  std::uint64_t rep_seed = 2;
};

int run_simulate(const SimFlags& sim, const FitFlags& flags) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);

  ScenarioSpec spec;
  spec.n = sim.n;
  spec.theta1_config = theta1_config_from_string(sim.theta1);
  spec.sparse_count = sim.sparse_count;
  spec.sparse_value = sim.sparse_value;
  spec.theta2_config = theta2_config_from_string(sim.theta2);
  spec.noise = NoiseSpec{flags.sigma1, flags.sigma2, sim.corr};
  spec.mean_seed = sim.mean_seed;
  spec.replication_seed_base = sim.rep_seed;

  const auto reports =
      run_replications(spec, sim.methods, sim.reps, flags.config());

  csv::Writer losses((dir / "losses.csv").string());
  losses.row({"scenario", "method", "replication", "loss"});
  for (const auto& report : reports) {
    for (std::size_t r = 0; r < report.losses.size(); ++r) {
      losses.row({spec.label(), report.method, std::to_string(r),
                  csv::format_double(report.losses[r])});
    }
  }
  csv::Writer summary((dir / "summary.csv").string());
  summary.row({"method", "mean_loss", "se"});
  for (const auto& report : reports) {
    summary.row({report.method, csv::format_double(report.mean_loss),
                 csv::format_double(report.standard_error)});
    std::cout << report.method << " mean_loss="
              << csv::format_double(report.mean_loss)
              << " se=" << csv::format_double(report.standard_error) << '\n';
  }

  tools::RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.config = flags.config_json();
  manifest.config["scenario"] = spec.label();
  manifest.config["reps"] = sim.reps;
  manifest.config["methods"] = sim.methods;
  manifest.seeds = {{"mean_seed", sim.mean_seed}, {"rep_seed", sim.rep_seed}};
  manifest.write(dir);
  return 0;
}

struct Table1Flags {
  std::vector<double> mu;
  std::vector<int> nonzero;
  int reps = 100;
  std::uint64_t rep_seed = 2;
};

int run_table1(const Table1Flags& t1, const FitFlags& flags) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);
  const std::vector<double> mus =
      t1.mu.empty() ? std::vector<double>{3, 4, 5, 7} : t1.mu;
  const std::vector<int> nonzeros =
      t1.nonzero.empty() ? std::vector<int>{5, 50, 500} : t1.nonzero;

  csv::Writer w((dir / "table1.csv").string());
  w.row({"nonzero", "mu", "avg_total_squared_error"});
  for (int nz : nonzeros) {
    for (double mu : mus) {
      const double err =
          table1_experiment(mu, nz, t1.reps, flags.config(), t1.rep_seed);
      w.row({std::to_string(nz), csv::format_double(mu),
             csv::format_double(err)});
      std::cout << "nonzero=" << nz << " mu=" << csv::format_double(mu)
                << " avg_total_squared_error=" << csv::format_double(err)
                << std::endl;
    }
  }

  tools::RunManifest manifest;
  manifest.subcommand = "simulate table1";
  manifest.config = flags.config_json();
  manifest.config["reps"] = t1.reps;
  manifest.seeds = {{"rep_seed", t1.rep_seed}};
  manifest.write(dir);
  return 0;
}

// ---------------------------------------------------------------- classify

int run_classify_train(const std::string& train_path,
                       const std::string& labels_path,
                       const std::string& aux_path, double threshold,
                       const FitFlags& flags) {
  apply_threads(flags.threads);
  const fs::path dir = prepare_out_dir(flags.out);
  const ExpressionDataset data = load_expression(train_path, labels_path);
  std::optional<std::unordered_map<std::string, double>> aux;
  if (!aux_path.empty()) aux = load_aux(aux_path);

  const TrainedClassifier model = train(data, aux, flags.config(), threshold);

  json j;
  j["kept_gene_ids"] = model.kept_gene_ids;
  j["theta_hat"] = model.theta_hat;
  j["s_hat"] = model.s_hat;
  j["cutoff"] = model.cutoff;
  j["aux_used"] = model.aux_used;
  j["threshold"] = threshold;
  write_json(dir / "model.json", j);

  tools::RunManifest manifest;
  manifest.subcommand = "classify train";
  manifest.config = flags.config_json();
  manifest.config["threshold"] = threshold;
  manifest.input_paths = {train_path, labels_path};
  if (!aux_path.empty()) manifest.input_paths.push_back(aux_path);
  manifest.write(dir);
  return 0;
}

int run_classify_predict(const std::string& model_path,
                         const std::string& test_path,
                         const std::string& truth_path,
                         const FitFlags& flags) {
  const fs::path dir = prepare_out_dir(flags.out);
  std::ifstream min(model_path);
  if (!min) throw std::invalid_argument("cannot open model " + model_path);
  json j = json::parse(min);
  TrainedClassifier model;
  model.kept_gene_ids = j.at("kept_gene_ids").get<std::vector<std::string>>();
  model.theta_hat = j.at("theta_hat").get<std::vector<double>>();
  model.s_hat = j.at("s_hat").get<std::vector<double>>();
  model.cutoff = j.at("cutoff").get<double>();
  model.aux_used = j.at("aux_used").get<bool>();
  model.kept_genes.resize(model.kept_gene_ids.size());

  const csv::Table m = csv::read_file(test_path);
  if (m.header.empty() || m.header[0] != "gene_id") {
    throw std::invalid_argument(test_path + ": first column must be gene_id");
  }
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < m.rows.size(); ++r) row_of[m.rows[r][0]] = r;
  std::vector<std::size_t> rows;
  for (const auto& id : model.kept_gene_ids) {
    const auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw std::invalid_argument("gene " + id + " missing from " + test_path);
    }
    rows.push_back(it->second);
  }

  const std::size_t n_samples = m.header.size() - 1;
  std::vector<int> predictions(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::vector<double> sample;
    sample.reserve(rows.size());
    for (std::size_t r : rows) {
      sample.push_back(csv::parse_double(m.rows[r][s + 1], test_path));
    }
    predictions[s] = predict(model, sample);
  }

  csv::Writer w((dir / "predictions.csv").string());
  w.row({"sample_id", "label"});
  for (std::size_t s = 0; s < n_samples; ++s) {
    w.row({m.header[s + 1], std::to_string(predictions[s])});
  }

  json summary;
  if (!truth_path.empty()) {
    const csv::Table l = csv::read_file(truth_path);
    const std::size_t sid = l.column("sample_id");
    const std::size_t lab = l.column("label");
    std::unordered_map<std::string, int> truth;
    for (const auto& row : l.rows) {
      truth[row[sid]] = static_cast<int>(csv::parse_long(row[lab], truth_path));
    }
    int wrong = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const auto it = truth.find(m.header[s + 1]);
      if (it == truth.end()) {
        throw std::invalid_argument("sample " + m.header[s + 1] +
                                    " missing from " + truth_path);
      }
      if (it->second != predictions[s]) ++wrong;
    }
    summary["misclassification_rate"] =
        static_cast<double>(wrong) / static_cast<double>(n_samples);
    summary["n_test"] = n_samples;
    write_json(dir / "summary.json", summary);
  }

  tools::RunManifest manifest;
  manifest.subcommand = "classify predict";
  manifest.input_paths = {model_path, test_path};
  if (!truth_path.empty()) manifest.input_paths.push_back(truth_path);
  manifest.write(dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separable empirical Bayes estimation for paired Gaussian "
               "sequences: SURE-tuned shrinkage, oracle rules, simulation "
               "harness, and an integrative linear classifier"};
  app.require_subcommand(1);

  // estimate / estimate-1d
  FitFlags est_flags;
  std::string est_input;
  auto* est = app.add_subcommand("estimate", "fit the integrative rule");
  est->add_option("--input", est_input, "observations CSV (index,x1,x2)")
      ->required();
  add_fit_flags(est, est_flags, true);

  FitFlags est1_flags;
  std::string est1_input;
  auto* est1 = app.add_subcommand("estimate-1d", "fit the one-sequence rule");
  est1->add_option("--input", est1_input, "observations CSV (index,x1)")
      ->required();
  add_fit_flags(est1, est1_flags, false);

  // oracle
  FitFlags oracle_flags;
  std::string oracle_input, oracle_means, oracle_rule = "integrative";
  double oracle_corr = 0.0, oracle_rho = 0.0;
  auto* orc = app.add_subcommand("oracle", "oracle rules given true means");
  orc->add_option("--input", oracle_input, "observations CSV")->required();
  orc->add_option("--means", oracle_means, "means CSV (index,theta1,theta2)")
      ->required();
  orc->add_option("--rule", oracle_rule,
                  "integrative | regularized | univariate | correlated");
  orc->add_option("--corr", oracle_corr, "noise correlation (correlated rule)");
  orc->add_option("--rho", oracle_rho, "regularizer (regularized rule)");
  add_fit_flags(orc, oracle_flags, true);

  // sure
  FitFlags sure_flags;
  std::string sure_input, sure_support;
  double sure_rho = 0.0;
  auto* sure_cmd = app.add_subcommand("sure", "evaluate the risk estimate");
  sure_cmd->add_option("--input", sure_input, "observations CSV")->required();
  sure_cmd->add_option("--support", sure_support, "support CSV (index,t1,t2)")
      ->required();
  sure_cmd->add_option("--rho", sure_rho, "denominator regularizer");
  sure_cmd->add_option("--sigma1", sure_flags.sigma1, "primary noise SD");
  sure_cmd->add_option("--sigma2", sure_flags.sigma2, "auxiliary noise SD");
  sure_cmd->add_option("--out", sure_flags.out, "output directory");
  sure_cmd->add_option("--threads", sure_flags.threads, "OpenMP threads");

  // simulate (+ table1)
  FitFlags sim_fit_flags;
  SimFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "replication experiments");
  sim->set_config("--config", "", "key=value scenario file");
  sim->add_option("--n", sim_flags.n, "sequence length");
  sim->add_option("--theta1", sim_flags.theta1,
                  "normal01 | uniform | exp1 | sparse");
  sim->add_option("--sparse-count", sim_flags.sparse_count,
                  "nonzero count for sparse theta1");
  sim->add_option("--sparse-value", sim_flags.sparse_value,
                  "nonzero value for sparse theta1");
  sim->add_option("--theta2", sim_flags.theta2, "strong | weak | none");
  sim->add_option("--corr", sim_flags.corr, "noise correlation");
  sim->add_option("--reps", sim_flags.reps, "replication count");
  sim->add_option("--methods", sim_flags.methods, "method list")
      ->delimiter(',');
  sim->add_option("--mean-seed", sim_flags.mean_seed, "seed for the means");
  sim->add_option("--rep-seed", sim_flags.rep_seed, "seed base for noise");
  add_fit_flags(sim, sim_fit_flags, true);

  FitFlags t1_fit_flags;
  t1_fit_flags.k = 50;  // sparse experiment default grid
  Table1Flags t1_flags;
  auto* t1 = sim->add_subcommand("table1", "sparse one-sequence error grid");
  t1->add_option("--mu", t1_flags.mu, "nonzero mean values")->delimiter(',');
  t1->add_option("--nonzero", t1_flags.nonzero, "nonzero counts")
      ->delimiter(',');
  t1->add_option("--reps", t1_flags.reps, "replication count");
  t1->add_option("--rep-seed", t1_flags.rep_seed, "seed base for noise");
  add_fit_flags(t1, t1_fit_flags, false);

  // classify train / predict
  FitFlags cls_flags;
  std::string cls_train, cls_labels, cls_aux;
  double cls_threshold = 0.2;
  auto* cls = app.add_subcommand("classify", "integrative linear classifier");
  cls->require_subcommand(1);
  auto* cls_t = cls->add_subcommand("train", "train from expression data");
  cls_t->add_option("--train", cls_train, "matrix CSV (gene_id,<samples...>)")
      ->required();
  cls_t->add_option("--labels", cls_labels, "labels CSV (sample_id,label)")
      ->required();
  cls_t->add_option("--aux", cls_aux, "auxiliary z CSV (gene_id,z)");
  cls_t->add_option("--threshold", cls_threshold, "screening correlation bound");
  add_fit_flags(cls_t, cls_flags, false);

  FitFlags pred_flags;
  std::string pred_model, pred_test, pred_truth;
  auto* cls_p = cls->add_subcommand("predict", "predict labels for a matrix");
  cls_p->add_option("--model", pred_model, "model JSON from classify train")
      ->required();
  cls_p->add_option("--test", pred_test, "matrix CSV")->required();
  cls_p->add_option("--truth", pred_truth, "labels CSV for error reporting");
  cls_p->add_option("--out", pred_flags.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;  // usage error
  }

  try {
    if (est->parsed()) return run_estimate(est_input, est_flags, true);
    if (est1->parsed()) return run_estimate(est1_input, est1_flags, false);
    if (orc->parsed()) {
      return run_oracle(oracle_input, oracle_means, oracle_rule, oracle_corr,
                        oracle_rho, oracle_flags);
    }
    if (sure_cmd->parsed()) {
      return run_sure(sure_input, sure_support, sure_rho, sure_flags);
    }
    if (sim->parsed()) {
      if (t1->parsed()) return run_table1(t1_flags, t1_fit_flags);
      return run_simulate(sim_flags, sim_fit_flags);
    }
    if (cls->parsed()) {
      if (cls_t->parsed()) {
        return run_classify_train(cls_train, cls_labels, cls_aux,
                                  cls_threshold, cls_flags);
      }
      return run_classify_predict(pred_model, pred_test, pred_truth,
                                  pred_flags);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;  // data error
  }
  return 0;
}
