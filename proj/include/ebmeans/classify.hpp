#ifndef EBMEANS_CLASSIFY_HPP
#define EBMEANS_CLASSIFY_HPP

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ebmeans/optimizer.hpp"

namespace ebmeans {

// Two-class expression data: one row per gene, one column per sample.
struct ExpressionDataset {
  std::vector<std::string> gene_ids;
  std::vector<std::vector<double>> matrix;  // gene_ids.size() rows
  std::vector<int> labels;                  // 0/1 per sample column

  void validate() const;
  std::size_t n_genes() const { return gene_ids.size(); }
  std::size_t n_samples() const { return labels.size(); }
};

struct GeneStats {
  double mean0 = 0.0, mean1 = 0.0;  // class means
  double sd0 = 0.0, sd1 = 0.0;      // class sample SDs (n-1 denominator)
  double s_pooled = 0.0;            // sqrt(sd1^2/n1 + sd0^2/n0)
  double z = 0.0;                   // (mean1 - mean0) / s_pooled
  bool degenerate = false;          // zero variance in both classes
};

std::vector<GeneStats> training_statistics(const ExpressionDataset& data);

// Two-sided Welch t-test p-value per gene; degenerate genes get p = 1.
std::vector<double> welch_pvalues(const ExpressionDataset& data);

// Greedy decorrelation pass over genes sorted by ascending p-value (ties by
// index): keep the gene, drop every not-yet-kept gene whose absolute Pearson
// correlation with it exceeds the threshold. Returns kept row indices in
// kept order.
std::vector<std::size_t> correlation_screen(const ExpressionDataset& data,
                                            std::span<const double> pvalues,
                                            double threshold);

struct TrainedClassifier {
  std::vector<std::size_t> kept_genes;  // row indices into the training data
  std::vector<std::string> kept_gene_ids;
  std::vector<double> theta_hat;
  std::vector<double> s_hat;
  double cutoff = 0.0;
  bool aux_used = false;
};

// Full training pipeline: statistics, screening, then shrinkage of the
// per-gene z-scores (integrative against aux_z when provided, one-sequence
// otherwise; both with unit noise scale). aux_z maps gene id -> auxiliary
// z-score and must cover every kept gene. The cutoff is the linear score of
// the midpoint between the class centroids.
TrainedClassifier train(
    const ExpressionDataset& data,
    const std::optional<std::unordered_map<std::string, double>>& aux_z,
    const FitConfig& config, double threshold = 0.2);

// 1 iff sum_i theta_hat[i] * sample[i] / s_hat[i] >= cutoff. The sample is
// ordered like kept_genes.
int predict(const TrainedClassifier& model, std::span<const double> sample);

}  // namespace ebmeans

#endif
