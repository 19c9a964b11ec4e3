#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ebmeans/kernel.hpp"
#include "test_util.hpp"

using namespace ebmeans;

TEST_SUITE_BEGIN("kernel");

TEST_CASE("independent log density at the standard mode") {
  NoiseSpec noise{1.0, 1.0, 0.0};
  // -log(2*pi), high-precision direct evaluation
  CHECK(log_density_indep(0, 0, 0, 0, noise) ==
        doctest::Approx(-1.8378770664093454836).epsilon(1e-14));
}

TEST_CASE("independent log density, unequal scales") {
  NoiseSpec noise{1.0, 2.0, 0.0};
  // log{(1/(4*pi)) * exp(-1)}, high-precision direct evaluation
  CHECK(log_density_indep(1, 2, 0, 0, noise) ==
        doctest::Approx(-3.531024246969290793).epsilon(1e-14));
}

TEST_CASE("independent log density is symmetric in (x, t)") {
  std::mt19937_64 rng(11);
  NoiseSpec noise{0.7, 1.9, 0.0};
  for (int rep = 0; rep < 200; ++rep) {
    auto v = test_util::random_vector(rng, 4, -8.0, 8.0);
    CHECK(log_density_indep(v[0], v[1], v[2], v[3], noise) ==
          log_density_indep(v[2], v[3], v[0], v[1], noise));
  }
}

TEST_CASE("independent log density rejects bad inputs") {
  NoiseSpec noise{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(log_density_indep(std::nan(""), 0, 0, 0, noise),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      log_density_indep(0, 0, 0, 0, NoiseSpec{1.0, 1.0, 0.5}),
      std::invalid_argument);
  CHECK_THROWS_AS(log_density_indep(0, 0, 0, 0, NoiseSpec{-1.0, 1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("correlated log density values") {
  // high-precision direct evaluations of the bivariate normal density
  CHECK(log_density_corr(0, 0, 0, 0, NoiseSpec{1.0, 1.0, 0.9}) ==
        doctest::Approx(-1.0075114629985200295).epsilon(1e-14));
  CHECK(log_density_corr(1, -1, 0.5, 0.25, NoiseSpec{1.5, 0.75, -0.4}) ==
        doctest::Approx(-3.3235098635197950882).epsilon(1e-14));
}

TEST_CASE("correlated log density reduces to the independent one at r = 0") {
  std::mt19937_64 rng(12);
  NoiseSpec noise{1.3, 0.4, 0.0};
  for (int rep = 0; rep < 1000; ++rep) {
    auto v = test_util::random_vector(rng, 4, -10.0, 10.0);
    const double a = log_density_corr(v[0], v[1], v[2], v[3], noise);
    const double b = log_density_indep(v[0], v[1], v[2], v[3], noise);
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("correlated log density symmetry and validation") {
  NoiseSpec noise{1.0, 2.0, -0.6};
  CHECK(log_density_corr(1, 2, -1, 0.5, noise) ==
        log_density_corr(-1, 0.5, 1, 2, noise));
  CHECK_THROWS_AS(log_density_corr(0, 0, 0, 0, NoiseSpec{1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(log_density_corr(0, 0, 0, 0, NoiseSpec{1.0, 1.0, -1.5}),
                  std::invalid_argument);
}

TEST_CASE("density bound and translation invariance") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 1000; ++rep) {
    std::uniform_real_distribution<double> sig(0.2, 3.0);
    NoiseSpec noise{sig(rng), sig(rng), 0.0};
    auto v = test_util::random_vector(rng, 4, -6.0, 6.0);
    const double ld = log_density_indep(v[0], v[1], v[2], v[3], noise);
    const double bound = -std::log(2 * 3.14159265358979323846 * noise.sigma1 *
                                   noise.sigma2);
    CHECK(ld <= bound + 1e-12);
    CHECK(std::exp(ld) > 0.0);
    // the bound is attained at x = t
    CHECK(log_density_indep(v[0], v[1], v[0], v[1], noise) ==
          doctest::Approx(bound).epsilon(1e-13));
    // translating the first coordinate pair leaves the value unchanged
    const double c = test_util::random_vector(rng, 1, -20.0, 20.0)[0];
    CHECK(log_density_indep(v[0] + c, v[1], v[2] + c, v[3], noise) ==
          doctest::Approx(ld).epsilon(1e-9));
  }
}

TEST_CASE("log_sum_exp basics") {
  CHECK(log_sum_exp(std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(0.69314718055994531).epsilon(1e-14));
  CHECK(log_sum_exp(std::vector<double>{-1000.0, -1000.0}) ==
        doctest::Approx(-1000.0 + 0.69314718055994531).epsilon(1e-14));
  const double a = -123.456;
  CHECK(log_sum_exp(std::vector<double>{a}) == a);
  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("log_sum_exp bounds over random inputs") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 1000; ++rep) {
    std::uniform_int_distribution<std::size_t> len(1, 40);
    auto v = test_util::random_vector(rng, len(rng), -800.0, 700.0);
    const double lse = log_sum_exp(v);
    const double m = *std::max_element(v.begin(), v.end());
    CHECK(lse >= m);
    CHECK(lse <= m + std::log(static_cast<double>(v.size())) + 1e-12);
  }
}

TEST_CASE("pairwise_sum agrees with direct summation") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 200; ++rep) {
    std::uniform_int_distribution<std::size_t> len(1, 300);
    auto v = test_util::random_vector(rng, len(rng), -5.0, 5.0);
    double direct = 0.0;
    for (double x : v) direct += x;
    CHECK(pairwise_sum(v) == doctest::Approx(direct).epsilon(1e-12));
  }
  std::vector<double> ints{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  CHECK(pairwise_sum(ints) == 78.0);
}

TEST_SUITE_END();
