#include "sure_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ebmeans/kernel.hpp"

namespace ebmeans::detail {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Incremental scoring keeps the rebuild-time shift; a candidate whose log
// kernel exceeds it by more than this is handled at its own scale.
constexpr double kRescaleGuard = 500.0;
// exp() of anything below this is exactly zero in double precision.
constexpr double kVanish = -760.0;

inline double sure_term(double asum, double den, double bpos, double bneg,
                        double denom, double sig1sq) {
  if (!(denom > 0.0)) return 0.0;  // degenerate row: ratio terms vanish
  const double inv = 1.0 / denom;
  const double rb = (bpos - bneg) * inv;
  return 2.0 * asum * inv - 2.0 * sig1sq * den * inv - rb * rb;
}

}  // namespace

SureEngine::SureEngine(std::span<const double> x1, std::span<const double> x2,
                       double sigma1, double sigma2, double rho)
    : x1_(x1),
      x2_(x2),
      univariate_(x2.empty()),
      sigma1_(sigma1),
      sigma2_(sigma2),
      rho_(rho),
      n_(x1.size()) {
  if (n_ == 0) throw std::invalid_argument("SureEngine: empty observations");
  if (!univariate_ && x2_.size() != n_) {
    throw std::invalid_argument("SureEngine: x1/x2 length mismatch");
  }
  if (!(sigma1_ > 0.0) || (!univariate_ && !(sigma2_ > 0.0))) {
    throw std::invalid_argument("SureEngine: sigma must be positive");
  }
  if (rho_ < 0.0) throw std::invalid_argument("SureEngine: rho must be >= 0");
  inv1_ = 1.0 / sigma1_;
  inv2_ = univariate_ ? 0.0 : 1.0 / sigma2_;
  sig1sq_ = sigma1_ * sigma1_;
  log_const_ = univariate_
                   ? -std::log(sigma1_) - 0.5 * kLogTwoPi
                   : -std::log(sigma1_) - std::log(sigma2_) - kLogTwoPi;
  log_rho_ = rho_ > 0.0 ? std::log(rho_) : -kInf;

  shift_.assign(n_, 0.0);
  den_.assign(n_, 0.0);
  bpos_.assign(n_, 0.0);
  bneg_.assign(n_, 0.0);
  asum_.assign(n_, 0.0);
  rho_scaled_.assign(n_, 0.0);
  part_.assign(n_, 0.0);
  w2_.assign(n_, 0.0);
  base_den_.assign(n_, 0.0);
  base_bpos_.assign(n_, 0.0);
  base_bneg_.assign(n_, 0.0);
  base_asum_.assign(n_, 0.0);
}

void SureEngine::set_support(std::vector<double> t1, std::vector<double> t2) {
  if (t1.size() != n_ || (!univariate_ && t2.size() != n_)) {
    throw std::invalid_argument("SureEngine: support length mismatch");
  }
  t1_ = std::move(t1);
  t2_ = std::move(t2);
}

double SureEngine::log_kernel(std::size_t i, double tj1, double tj2) const {
  const double u1 = (x1_[i] - tj1) * inv1_;
  if (univariate_) return log_const_ - 0.5 * u1 * u1;
  const double u2 = (x2_[i] - tj2) * inv2_;
  return log_const_ - 0.5 * (u1 * u1 + u2 * u2);
}

void SureEngine::rebuild_row(std::size_t i) {
  const std::size_t n = n_;
  double m = -kInf;
  for (std::size_t j = 0; j < n; ++j) {
    m = std::max(m, log_kernel(i, t1_[j], univariate_ ? 0.0 : t2_[j]));
  }
  shift_[i] = m;
  if (m == -kInf) {  // every kernel underflowed outright
    den_[i] = bpos_[i] = bneg_[i] = asum_[i] = 0.0;
    rho_scaled_[i] = rho_ > 0.0 ? kInf : 0.0;
    return;
  }
  double den = 0.0, bp = 0.0, bn = 0.0, a = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dl = log_kernel(i, t1_[j], univariate_ ? 0.0 : t2_[j]) - m;
    if (dl < kVanish) continue;
    const double k = std::exp(dl);
    const double w = t1_[j] - x1_[i];
    den += k;
    a += w * w * k;
    if (w >= 0.0) {
      bp += w * k;
    } else {
      bn -= w * k;
    }
  }
  den_[i] = den;
  bpos_[i] = bp;
  bneg_[i] = bn;
  asum_[i] = a;
  rho_scaled_[i] = rho_ > 0.0 ? std::exp(log_rho_ - m) : 0.0;
}

void SureEngine::rebuild() {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    rebuild_row(static_cast<std::size_t>(i));
  }
  if (rho_ == 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (den_[i] == 0.0) {
        underflow_seen_ = true;
        break;
      }
    }
  }
}

double SureEngine::sure_value() {
  reduce_buf_.resize(n_);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    reduce_buf_[i] = sure_term(asum_[i], den_[i], bpos_[i], bneg_[i],
                               rho_scaled_[i] + den_[i], sig1sq_);
  }
  return pairwise_sum(reduce_buf_) / static_cast<double>(n_) + sig1sq_;
}

std::vector<double> SureEngine::estimates() const {
  const auto [tmin_it, tmax_it] = std::minmax_element(t1_.begin(), t1_.end());
  const double tmin = *tmin_it, tmax = *tmax_it;
  std::vector<double> est(n_);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double denom = rho_scaled_[i] + den_[i];
    const double x = x1_[i];
    double e;
    if (!(denom > 0.0)) {
      e = x;  // all kernels underflowed with rho = 0
    } else {
      e = x + (bpos_[i] - bneg_[i]) / denom;
      // the exact ratio cannot leave these hulls; clip roundoff excursions
      const double lo = rho_ > 0.0 ? std::min(tmin, x) : tmin;
      const double hi = rho_ > 0.0 ? std::max(tmax, x) : tmax;
      e = std::clamp(e, lo, hi);
    }
    est[static_cast<std::size_t>(i)] = e;
  }
  return est;
}

void SureEngine::begin_coordinate(std::size_t j, int dim) {
  cur_j_ = j;
  cur_dim_ = dim;
  const double tj1 = t1_[j];
  const double tj2 = univariate_ ? 0.0 : t2_[j];
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    double part;
    if (univariate_) {
      part = log_const_;
    } else if (dim == 1) {
      const double u2 = (x2_[i] - tj2) * inv2_;
      part = log_const_ - 0.5 * u2 * u2;
    } else {
      const double u1 = (x1_[i] - tj1) * inv1_;
      part = log_const_ - 0.5 * u1 * u1;
    }
    part_[i] = part;
    const double w_old = tj1 - x1_[i];
    w2_[i] = w_old;
    const double l_old = log_kernel(i, tj1, tj2);
    const double dl = l_old - shift_[i];
    const double k_old = (dl >= kVanish) ? std::exp(dl) : 0.0;
    base_den_[i] = std::max(den_[i] - k_old, 0.0);
    base_asum_[i] = std::max(asum_[i] - w_old * w_old * k_old, 0.0);
    if (w_old >= 0.0) {
      base_bpos_[i] = std::max(bpos_[i] - w_old * k_old, 0.0);
      base_bneg_[i] = bneg_[i];
    } else {
      base_bpos_[i] = bpos_[i];
      base_bneg_[i] = std::max(bneg_[i] + w_old * k_old, 0.0);
    }
  }
}

double SureEngine::score_candidate(double c, std::vector<double>& scratch) const {
  scratch.resize(n_);
  const double* xd = (cur_dim_ == 1) ? x1_.data() : x2_.data();
  const double invd = (cur_dim_ == 1) ? inv1_ : inv2_;
  const bool dim1 = (cur_dim_ == 1);
  for (std::size_t i = 0; i < n_; ++i) {
    const double u = (xd[i] - c) * invd;
    const double l = part_[i] - 0.5 * u * u;
    const double dl = l - shift_[i];
    const double w = dim1 ? c - x1_[i] : w2_[i];
    double den, bp, bn, a, denom;
    if (dl > kRescaleGuard) {
      // candidate dominates the stale shift; evaluate at its own scale
      const double f = std::exp(shift_[i] - l);
      den = base_den_[i] * f + 1.0;
      a = base_asum_[i] * f + w * w;
      bp = base_bpos_[i] * f;
      bn = base_bneg_[i] * f;
      if (w >= 0.0) {
        bp += w;
      } else {
        bn -= w;
      }
      denom = (rho_ > 0.0 ? std::exp(log_rho_ - l) : 0.0) + den;
    } else {
      const double k = (dl >= kVanish) ? std::exp(dl) : 0.0;
      den = base_den_[i] + k;
      a = base_asum_[i] + w * w * k;
      bp = base_bpos_[i];
      bn = base_bneg_[i];
      if (w >= 0.0) {
        bp += w * k;
      } else {
        bn -= w * k;
      }
      denom = rho_scaled_[i] + den;
    }
    scratch[i] = sure_term(a, den, bp, bn, denom, sig1sq_);
  }
  return pairwise_sum(scratch) / static_cast<double>(n_) + sig1sq_;
}

void SureEngine::commit_candidate(double c) {
  const double* xd = (cur_dim_ == 1) ? x1_.data() : x2_.data();
  const double invd = (cur_dim_ == 1) ? inv1_ : inv2_;
  const bool dim1 = (cur_dim_ == 1);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double u = (xd[i] - c) * invd;
    const double l = part_[i] - 0.5 * u * u;
    const double dl = l - shift_[i];
    const double w = dim1 ? c - x1_[i] : w2_[i];
    if (dl > kRescaleGuard) {
      const double f = std::exp(shift_[i] - l);
      den_[i] = base_den_[i] * f + 1.0;
      asum_[i] = base_asum_[i] * f + w * w;
      double bp = base_bpos_[i] * f;
      double bn = base_bneg_[i] * f;
      if (w >= 0.0) {
        bp += w;
      } else {
        bn -= w;
      }
      bpos_[i] = bp;
      bneg_[i] = bn;
      shift_[i] = l;
      rho_scaled_[i] = rho_ > 0.0 ? std::exp(log_rho_ - l) : 0.0;
    } else {
      const double k = (dl >= kVanish) ? std::exp(dl) : 0.0;
      den_[i] = base_den_[i] + k;
      asum_[i] = base_asum_[i] + w * w * k;
      if (w >= 0.0) {
        bpos_[i] = base_bpos_[i] + w * k;
        bneg_[i] = base_bneg_[i];
      } else {
        bpos_[i] = base_bpos_[i];
        bneg_[i] = base_bneg_[i] - w * k;
      }
    }
  }
  if (cur_dim_ == 1) {
    t1_[cur_j_] = c;
  } else {
    t2_[cur_j_] = c;
  }
}

}  // namespace ebmeans::detail
