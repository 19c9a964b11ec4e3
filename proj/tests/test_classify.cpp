#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "ebmeans/classify.hpp"
#include "test_util.hpp"

using namespace ebmeans;

namespace {

ExpressionDataset two_gene_dataset() {
  ExpressionDataset data;
  data.gene_ids = {"g1", "g2"};
  //                 class 0      class 1
  data.matrix = {{1.0, 2.0, 3.0, 5.0},
                 {0.5, 0.7, 0.4, 0.6}};
  data.labels = {0, 0, 1, 1};
  return data;
}

ExpressionDataset random_dataset(std::mt19937_64& rng, std::size_t genes,
                                 std::size_t per_class, double shift_sd) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::normal_distribution<double> shift(0.0, shift_sd);
  ExpressionDataset data;
  for (std::size_t g = 0; g < genes; ++g) {
    data.gene_ids.push_back("g" + std::to_string(g));
    const double delta = shift(rng);
    std::vector<double> row;
    for (std::size_t s = 0; s < 2 * per_class; ++s) {
      row.push_back(noise(rng) + (s >= per_class ? delta : 0.0));
    }
    data.matrix.push_back(std::move(row));
  }
  data.labels.assign(2 * per_class, 0);
  for (std::size_t s = per_class; s < 2 * per_class; ++s) data.labels[s] = 1;
  return data;
}

}  // namespace

TEST_SUITE_BEGIN("classify");

TEST_CASE("training statistics on a hand-checked dataset") {
  const auto stats = training_statistics(two_gene_dataset());
  REQUIRE(stats.size() == 2);
  // frozen from a direct spreadsheet-style computation
  CHECK(stats[0].mean0 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(stats[0].mean1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(stats[0].sd0 == doctest::Approx(0.70710678118654757).epsilon(1e-13));
  CHECK(stats[0].sd1 == doctest::Approx(1.4142135623730951).epsilon(1e-13));
  CHECK(stats[0].s_pooled ==
        doctest::Approx(1.1180339887498949).epsilon(1e-13));
  CHECK(stats[0].z == doctest::Approx(2.2360679774997898).epsilon(1e-13));
  CHECK(!stats[0].degenerate);
}

TEST_CASE("equal class means give zero z") {
  ExpressionDataset data;
  data.gene_ids = {"g"};
  data.matrix = {{1.0, 3.0, 3.0, 1.0}};
  data.labels = {0, 0, 1, 1};
  CHECK(training_statistics(data)[0].z == 0.0);
}

TEST_CASE("degenerate variance in both classes is flagged") {
  ExpressionDataset data;
  data.gene_ids = {"flat", "ok"};
  data.matrix = {{0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 2.0, 3.0}};
  data.labels = {0, 0, 1, 1};
  const auto stats = training_statistics(data);
  CHECK(stats[0].degenerate);
  CHECK(!stats[1].degenerate);
  CHECK(welch_pvalues(data)[0] == 1.0);

  // degenerate genes never reach the fitted model
  const auto model = train(data, std::nullopt, FitConfig{});
  REQUIRE(model.kept_gene_ids.size() == 1);
  CHECK(model.kept_gene_ids[0] == "ok");
}

TEST_CASE("welch p-values against frozen references") {
  const auto p = welch_pvalues(two_gene_dataset());
  // scipy.stats.ttest_ind(equal_var=False) on the same data
  CHECK(p[0] == doctest::Approx(0.19872738893452604).epsilon(1e-10));

  ExpressionDataset flat;
  flat.gene_ids = {"same"};
  flat.matrix = {{0.0, 1.0, 0.0, 1.0}};
  flat.labels = {0, 0, 1, 1};
  CHECK(welch_pvalues(flat)[0] == doctest::Approx(1.0).epsilon(1e-14));

  ExpressionDataset shifted;
  shifted.gene_ids = {"big"};
  std::vector<double> row;
  std::mt19937_64 rng(71);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int s = 0; s < 20; ++s) row.push_back(noise(rng));
  for (int s = 0; s < 20; ++s) row.push_back(noise(rng) + 5.0);
  shifted.matrix = {row};
  shifted.labels.assign(40, 0);
  for (int s = 20; s < 40; ++s) shifted.labels[s] = 1;
  CHECK(welch_pvalues(shifted)[0] < 1e-6);
}

TEST_CASE("null p-values look uniform" * doctest::timeout(120)) {
  std::mt19937_64 rng(72);
  const auto data = random_dataset(rng, 1000, 20, 0.0);
  auto p = welch_pvalues(data);
  std::sort(p.begin(), p.end());
  double d = 0.0;
  const double n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(p[i] - (i + 1) / n));
    d = std::max(d, std::abs(p[i] - i / n));
  }
  // Kolmogorov-Smirnov at the 0.01 level
  CHECK(d <= 1.6276 / std::sqrt(n));
}

TEST_CASE("correlation screening") {
  SUBCASE("orthogonal rows all kept") {
    ExpressionDataset data;
    data.gene_ids = {"a", "b", "c", "d"};
    data.matrix = {{1, 1, -1, -1},
                   {1, -1, 1, -1},
                   {1, -1, -1, 1},
                   {2, 2, 2, 2.5}};
    data.labels = {0, 0, 1, 1};
    const std::vector<double> p{0.01, 0.02, 0.03, 0.04};
    CHECK(correlation_screen(data, p, 0.2).size() == 4);
    // nothing exceeds a threshold of 1
    CHECK(correlation_screen(data, p, 1.0).size() == 4);
  }

  SUBCASE("duplicate rows keep only the more significant copy") {
    ExpressionDataset data;
    data.gene_ids = {"dup1", "dup2"};
    data.matrix = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    data.labels = {0, 0, 1, 1};
    const std::vector<double> p{0.5, 0.1};
    const auto kept = correlation_screen(data, p, 0.2);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 1);  // the smaller p-value
  }

  SUBCASE("kept pairs respect the bound; rescreening is idempotent") {
    std::mt19937_64 rng(73);
    for (int rep = 0; rep < 20; ++rep) {
      const auto data = random_dataset(rng, 40, 10, 0.5);
      const auto p = welch_pvalues(data);
      const auto kept = correlation_screen(data, p, 0.2);
      ExpressionDataset sub;
      sub.labels = data.labels;
      std::vector<double> sub_p;
      for (std::size_t g : kept) {
        sub.gene_ids.push_back(data.gene_ids[g]);
        sub.matrix.push_back(data.matrix[g]);
        sub_p.push_back(p[g]);
      }
      for (std::size_t a = 0; a < sub.matrix.size(); ++a) {
        for (std::size_t b = a + 1; b < sub.matrix.size(); ++b) {
          double ma = 0, mb = 0;
          for (double v : sub.matrix[a]) ma += v;
          for (double v : sub.matrix[b]) mb += v;
          ma /= sub.matrix[a].size();
          mb /= sub.matrix[b].size();
          double sab = 0, saa = 0, sbb = 0;
          for (std::size_t s = 0; s < sub.matrix[a].size(); ++s) {
            sab += (sub.matrix[a][s] - ma) * (sub.matrix[b][s] - mb);
            saa += (sub.matrix[a][s] - ma) * (sub.matrix[a][s] - ma);
            sbb += (sub.matrix[b][s] - mb) * (sub.matrix[b][s] - mb);
          }
          CHECK(std::abs(sab / std::sqrt(saa * sbb)) <= 0.2);
        }
      }
      CHECK(correlation_screen(sub, sub_p, 0.2).size() == kept.size());
    }
  }
}

TEST_CASE("training pipeline") {
  std::mt19937_64 rng(74);
  const auto data = random_dataset(rng, 30, 15, 0.8);

  SUBCASE("aux does not change screening or scales") {
    const auto plain = train(data, std::nullopt, FitConfig{});
    std::unordered_map<std::string, double> aux;
    const auto stats = training_statistics(data);
    for (std::size_t g = 0; g < data.n_genes(); ++g) {
      aux[data.gene_ids[g]] = 2.0 * stats[g].z * stats[g].z;
    }
    const auto with_aux = train(data, aux, FitConfig{});
    CHECK(with_aux.aux_used);
    CHECK(!plain.aux_used);
    CHECK(plain.kept_genes == with_aux.kept_genes);
    CHECK(plain.s_hat == with_aux.s_hat);
  }

  SUBCASE("missing aux gene is reported by name") {
    std::unordered_map<std::string, double> aux;
    aux["g0"] = 1.0;  // everything else missing
    try {
      (void)train(data, aux, FitConfig{});
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("missing from auxiliary") !=
            std::string::npos);
    }
  }
}

TEST_CASE("prediction rule") {
  TrainedClassifier model;
  model.kept_genes = {0, 1};
  model.kept_gene_ids = {"a", "b"};
  model.theta_hat = {1.0, -2.0};
  model.s_hat = {0.5, 1.0};
  model.cutoff = 1.0;
  // score = 1/0.5 * s0 - 2 * s1
  CHECK(predict(model, std::vector<double>{1.0, 0.0}) == 1);   // score 2
  CHECK(predict(model, std::vector<double>{0.0, 1.0}) == 0);   // score -2
  CHECK(predict(model, std::vector<double>{0.5, 0.0}) == 1);   // score == cutoff
  CHECK_THROWS_AS(predict(model, std::vector<double>{1.0}),
                  std::invalid_argument);

  // all-zero weights decide by I(0 >= cutoff)
  model.theta_hat = {0.0, 0.0};
  model.cutoff = 0.0;
  CHECK(predict(model, std::vector<double>{5.0, -3.0}) == 1);
}

TEST_CASE("single kept gene reduces to midpoint thresholding") {
  ExpressionDataset data;
  data.gene_ids = {"g"};
  data.matrix = {{0.0, 1.0, 0.5, 4.0, 5.0, 4.5}};
  data.labels = {0, 0, 0, 1, 1, 1};
  const auto model = train(data, std::nullopt, FitConfig{});
  REQUIRE(model.kept_genes.size() == 1);
  const double midpoint = (0.5 + 4.5) / 2.0;  // class means 0.5 and 4.5
  CHECK(predict(model, std::vector<double>{midpoint + 0.1}) == 1);
  CHECK(predict(model, std::vector<double>{midpoint - 0.1}) == 0);
}

TEST_CASE("predictions are invariant to per-gene rescaling") {
  std::mt19937_64 rng(75);
  const auto data = random_dataset(rng, 12, 10, 1.0);
  const auto model = train(data, std::nullopt, FitConfig{});

  ExpressionDataset scaled = data;
  const double factor = 4.0;  // power of two keeps the scaling exact
  for (double& v : scaled.matrix[3]) v *= factor;
  const auto scaled_model = train(scaled, std::nullopt, FitConfig{});
  CHECK(model.kept_genes == scaled_model.kept_genes);

  std::normal_distribution<double> noise(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> sample, scaled_sample;
    for (std::size_t i = 0; i < model.kept_genes.size(); ++i) {
      const double v = noise(rng);
      sample.push_back(v);
      scaled_sample.push_back(model.kept_genes[i] == 3 ? v * factor : v);
    }
    CHECK(predict(model, sample) == predict(scaled_model, scaled_sample));
  }
}

TEST_SUITE_END();
