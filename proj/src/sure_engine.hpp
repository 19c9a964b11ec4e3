#ifndef EBMEANS_SURE_ENGINE_HPP
#define EBMEANS_SURE_ENGINE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ebmeans::detail {

// Per-observation kernel accumulators for the separable rule family, shared
// by the rule, its unbiased risk estimate, and the coordinate-descent
// optimizer so one set of kernel evaluations serves all three.
//
// For each observation i the engine keeps, in units of exp(shift[i]):
//   den  = sum_j k_ij
//   bpos, bneg = positive / negative parts of sum_j (t1_j - x1_i) k_ij
//   asum = sum_j (t1_j - x1_i)^2 k_ij
// where k_ij is the Gaussian kernel at support point j (bivariate when x2 is
// present, univariate otherwise). shift[i] is the row maximum of the log
// kernels at the last rebuild; signed parts are aggregated separately because
// the weighted summands change sign.
//
// Coordinate updates go through begin_coordinate / score_candidate /
// commit_candidate. Scoring never mutates shared state, so distinct
// candidates may be scored from different threads; each candidate's inner
// loop runs serially in index order and all cross-observation reductions use
// fixed-order pairwise summation, which keeps every result bit-identical
// regardless of thread count.
class SureEngine {
 public:
  // x2 empty selects the univariate kernel (sigma2 then unused).
  SureEngine(std::span<const double> x1, std::span<const double> x2,
             double sigma1, double sigma2, double rho);

  void set_support(std::vector<double> t1, std::vector<double> t2);
  const std::vector<double>& t1() const { return t1_; }
  const std::vector<double>& t2() const { return t2_; }

  // Full recompute of all accumulators with fresh per-row shifts.
  void rebuild();

  // Risk estimate / estimates from the current accumulators.
  double sure_value();
  std::vector<double> estimates() const;

  // True whether some row with rho == 0 had every kernel underflow at a
  // rebuild (the degenerate fallback: estimate x1_i, zero ratio terms).
  bool underflow_seen() const { return underflow_seen_; }

  // Coordinate update protocol: begin_coordinate(j, dim) caches the removal
  // of support point j's contribution, score_candidate evaluates the risk
  // estimate with t_{j,dim} replaced by c, commit_candidate adopts c using
  // the same arithmetic the scoring pass used.
  void begin_coordinate(std::size_t j, int dim);
  double score_candidate(double c, std::vector<double>& scratch) const;
  void commit_candidate(double c);

  std::size_t size() const { return n_; }

 private:
  double log_kernel(std::size_t i, double tj1, double tj2) const;
  void rebuild_row(std::size_t i);

  std::span<const double> x1_;
  std::span<const double> x2_;
  bool univariate_;
  double sigma1_, sigma2_, rho_, log_rho_;
  double inv1_, inv2_;     // 1/sigma_d
  double sig1sq_;
  double log_const_;       // additive log-kernel constant
  std::size_t n_;

  std::vector<double> t1_, t2_;
  std::vector<double> shift_, den_, bpos_, bneg_, asum_, rho_scaled_;

  // caches valid between begin_coordinate and commit_candidate
  std::size_t cur_j_ = 0;
  int cur_dim_ = 1;
  std::vector<double> part_;  // fixed-coordinate log-kernel part per i
  std::vector<double> w2_;    // weight t1_j - x1_i (used when dim == 2)
  std::vector<double> base_den_, base_bpos_, base_bneg_, base_asum_;

  mutable std::vector<double> reduce_buf_;
  bool underflow_seen_ = false;
};

}  // namespace ebmeans::detail

#endif
