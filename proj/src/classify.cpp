#include "ebmeans/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace ebmeans {

namespace {

struct ClassSplit {
  std::vector<std::size_t> idx0, idx1;
};

ClassSplit split_classes(const ExpressionDataset& data) {
  ClassSplit split;
  for (std::size_t s = 0; s < data.labels.size(); ++s) {
    (data.labels[s] == 0 ? split.idx0 : split.idx1).push_back(s);
  }
  return split;
}

double mean_over(const std::vector<double>& row,
                 const std::vector<std::size_t>& idx) {
  double m = 0.0;
  for (std::size_t s : idx) m += row[s];
  return m / static_cast<double>(idx.size());
}

double sd_over(const std::vector<double>& row,
               const std::vector<std::size_t>& idx, double mean) {
  double ss = 0.0;
  for (std::size_t s : idx) ss += (row[s] - mean) * (row[s] - mean);
  return std::sqrt(ss / static_cast<double>(idx.size() - 1));
}

// Pearson correlation of two rows; zero-variance rows correlate with nothing.
double row_correlation(const std::vector<double>& a,
                       const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    ma += a[s];
    mb += b[s];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double da = a[s] - ma, db = b[s] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

void ExpressionDataset::validate() const {
  if (gene_ids.empty() || gene_ids.size() != matrix.size()) {
    throw std::invalid_argument("ExpressionDataset: gene_ids/matrix size mismatch");
  }
  if (std::set<std::string>(gene_ids.begin(), gene_ids.end()).size() !=
      gene_ids.size()) {
    throw std::invalid_argument("ExpressionDataset: duplicate gene ids");
  }
  std::size_t n0 = 0, n1 = 0;
  for (int label : labels) {
    if (label == 0) {
      ++n0;
    } else if (label == 1) {
      ++n1;
    } else {
      throw std::invalid_argument("ExpressionDataset: labels must be 0 or 1");
    }
  }
  if (n0 < 2 || n1 < 2) {
    throw std::invalid_argument("ExpressionDataset: each class needs >= 2 samples");
  }
  for (const auto& row : matrix) {
    if (row.size() != labels.size()) {
      throw std::invalid_argument("ExpressionDataset: row length != sample count");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("ExpressionDataset: non-finite expression value");
      }
    }
  }
}

std::vector<GeneStats> training_statistics(const ExpressionDataset& data) {
  data.validate();
  const ClassSplit split = split_classes(data);
  const double n0 = static_cast<double>(split.idx0.size());
  const double n1 = static_cast<double>(split.idx1.size());
  std::vector<GeneStats> stats(data.n_genes());
  const std::ptrdiff_t g_end = static_cast<std::ptrdiff_t>(data.n_genes());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < g_end; ++g) {
    const auto& row = data.matrix[g];
    GeneStats st;
    st.mean0 = mean_over(row, split.idx0);
    st.mean1 = mean_over(row, split.idx1);
    st.sd0 = sd_over(row, split.idx0, st.mean0);
    st.sd1 = sd_over(row, split.idx1, st.mean1);
    st.s_pooled = std::sqrt(st.sd1 * st.sd1 / n1 + st.sd0 * st.sd0 / n0);
    st.degenerate = (st.sd0 == 0.0 && st.sd1 == 0.0);
    st.z = st.degenerate ? 0.0 : (st.mean1 - st.mean0) / st.s_pooled;
    stats[g] = st;
  }
  return stats;
}

std::vector<double> welch_pvalues(const ExpressionDataset& data) {
  const std::vector<GeneStats> stats = training_statistics(data);
  const ClassSplit split = split_classes(data);
  const double n0 = static_cast<double>(split.idx0.size());
  const double n1 = static_cast<double>(split.idx1.size());
  std::vector<double> pvalues(stats.size(), 1.0);
  const std::ptrdiff_t g_end = static_cast<std::ptrdiff_t>(stats.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < g_end; ++g) {
    const GeneStats& st = stats[g];
    if (st.degenerate) continue;  // ranked last
    const double v0 = st.sd0 * st.sd0 / n0;
    const double v1 = st.sd1 * st.sd1 / n1;
    const double t = (st.mean1 - st.mean0) / st.s_pooled;
    const double df_den = v1 * v1 / (n1 - 1.0) + v0 * v0 / (n0 - 1.0);
    const double df = (v0 + v1) * (v0 + v1) / df_den;
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    pvalues[g] = std::clamp(p, 1e-300, 1.0);
  }
  return pvalues;
}

std::vector<std::size_t> correlation_screen(const ExpressionDataset& data,
                                            std::span<const double> pvalues,
                                            double threshold) {
  data.validate();
  if (pvalues.size() != data.n_genes()) {
    throw std::invalid_argument("correlation_screen: pvalues length mismatch");
  }
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw std::invalid_argument("correlation_screen: threshold must lie in (0, 1]");
  }
  std::vector<std::size_t> order(data.n_genes());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pvalues[a] < pvalues[b];
  });

  std::vector<char> removed(data.n_genes(), 0);
  std::vector<std::size_t> kept;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t g = order[pos];
    if (removed[g]) continue;
    kept.push_back(g);
    for (std::size_t later = pos + 1; later < order.size(); ++later) {
      const std::size_t h = order[later];
      if (removed[h]) continue;
      if (std::abs(row_correlation(data.matrix[g], data.matrix[h])) > threshold) {
        removed[h] = 1;
      }
    }
  }
  return kept;
}

TrainedClassifier train(
    const ExpressionDataset& data,
    const std::optional<std::unordered_map<std::string, double>>& aux_z,
    const FitConfig& config, double threshold) {
  config.validate();
  const std::vector<GeneStats> stats = training_statistics(data);

  // degenerate genes are set aside before ranking and screening
  std::vector<std::size_t> usable;
  for (std::size_t g = 0; g < stats.size(); ++g) {
    if (!stats[g].degenerate) usable.push_back(g);
  }
  if (usable.empty()) {
    throw std::invalid_argument("train: every gene has degenerate variance");
  }
  ExpressionDataset working;
  working.labels = data.labels;
  for (std::size_t g : usable) {
    working.gene_ids.push_back(data.gene_ids[g]);
    working.matrix.push_back(data.matrix[g]);
  }
  const std::vector<double> pvalues = welch_pvalues(working);
  const std::vector<std::size_t> kept_sub =
      correlation_screen(working, pvalues, threshold);

  TrainedClassifier model;
  model.aux_used = aux_z.has_value();
  std::vector<double> z, aux;
  for (std::size_t sub : kept_sub) {
    const std::size_t g = usable[sub];
    model.kept_genes.push_back(g);
    model.kept_gene_ids.push_back(data.gene_ids[g]);
    model.s_hat.push_back(stats[g].s_pooled);
    z.push_back(stats[g].z);
    if (aux_z) {
      const auto it = aux_z->find(data.gene_ids[g]);
      if (it == aux_z->end()) {
        throw std::invalid_argument("train: gene " + data.gene_ids[g] +
                                    " missing from auxiliary z-scores");
      }
      aux.push_back(it->second);
    }
  }

  // z-scores enter estimation as unit-variance observations
  if (aux_z) {
    ObservationSet obs{z, aux, NoiseSpec{1.0, 1.0, 0.0}};
    model.theta_hat = fit_integrative(obs, config).estimates;
  } else {
    model.theta_hat = fit_univariate(z, 1.0, config).estimates;
  }

  double cutoff = 0.0;
  for (std::size_t i = 0; i < model.kept_genes.size(); ++i) {
    const GeneStats& st = stats[model.kept_genes[i]];
    cutoff += model.theta_hat[i] * (st.mean1 + st.mean0) / (2.0 * model.s_hat[i]);
  }
  model.cutoff = cutoff;
  return model;
}

int predict(const TrainedClassifier& model, std::span<const double> sample) {
  if (sample.size() != model.kept_genes.size()) {
    throw std::invalid_argument("predict: sample length != kept gene count");
  }
  double score = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    score += model.theta_hat[i] * sample[i] / model.s_hat[i];
  }
  return score >= model.cutoff ? 1 : 0;
}

}  // namespace ebmeans
