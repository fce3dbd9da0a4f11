/**
 * @file core.hpp
 * @brief Distributional functions of the discrete skew logistic law
 *        DSLogistic(p, q, mu) and of its continuous skew logistic parent.
 *
 * The law is the floor of a continuous skew logistic variable, so that
 * P(X = x) = S(x) - S(x + 1) with S the continuous survival function. For
 * z = x - mu the pmf is
 *
 *   z >= 0 :  2 (log q / log pq) (1 - p) p^z / ((1 + p^z)(1 + p^{z+1}))
 *   z <= -1:  2 (log p / log pq) (1 - q) q^k / ((1 + q^k)(1 + q^{k+1})),
 *             k = -1 - z
 *
 * i.e. the two half-lines are mirror images with p and q exchanged.
 * The survival convention throughout is sf(x) = P(X >= x).
 */
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dslogistic/detail/numeric.hpp"
#include "dslogistic/params.hpp"

namespace dslogistic {

namespace detail {

/// Branch view of an offset z = x - mu: tail parameter r, its log, the
/// branch weight log(a)/log(pq) and the mirrored index k >= 0.
struct Branch {
  double r;
  double log_r;
  double weight;
  integer k;
  bool nonnegative;
};

inline Branch branch_of(const DSLParams& d, integer z) noexcept {
  if (z >= 0) return {d.p(), d.log_p(), d.mass_nonnegative(), z, true};
  return {d.q(), d.log_q(), d.mass_negative(), -1 - z, false};
}

inline void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw domain_error("quantile order must satisfy 0 < gamma < 1");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Discrete law

inline double pmf(const DSLParams& d, integer x) {
  const auto b = detail::branch_of(d, x - d.mu());
  const double rk = std::pow(b.r, static_cast<double>(b.k));
  return 2.0 * b.weight * (1.0 - b.r) * rk / ((1.0 + rk) * (1.0 + rk * b.r));
}

/// log pmf in the cancellation-free product form; finite for any x.
inline double log_pmf(const DSLParams& d, integer x) {
  const auto b = detail::branch_of(d, x - d.mu());
  return std::log(2.0 * b.weight) +
         detail::logistic_kernel_value(b.r, b.log_r,
                                       static_cast<double>(b.k));
}

/// P(X <= x).
inline double cdf(const DSLParams& d, integer x) {
  const integer z = x - d.mu();
  if (z <= -1) {
    const double t = std::pow(d.q(), static_cast<double>(-(z + 1)));
    return 2.0 * d.mass_negative() * t / (1.0 + t);
  }
  const double t = std::pow(d.p(), static_cast<double>(z + 1));
  return 1.0 - 2.0 * d.mass_nonnegative() * t / (1.0 + t);
}

/// P(X >= x).
inline double sf(const DSLParams& d, integer x) {
  const integer z = x - d.mu();
  if (z >= 0) {
    const double t = std::pow(d.p(), static_cast<double>(z));
    return 2.0 * d.mass_nonnegative() * t / (1.0 + t);
  }
  const double t = std::pow(d.q(), static_cast<double>(-z));
  return 1.0 - 2.0 * d.mass_negative() * t / (1.0 + t);
}

/// pmf(x) / P(X >= x). The right branch uses (1 - p)/(1 + p^{z+1}) directly
/// so the ratio stays defined after both factors underflow.
inline double hazard(const DSLParams& d, integer x) {
  const integer z = x - d.mu();
  if (z >= 0) {
    return (1.0 - d.p()) / (1.0 + std::pow(d.p(), static_cast<double>(z + 1)));
  }
  return pmf(d, x) / sf(d, x);
}

/// pmf(x + 1) / pmf(x). Below the junction it is > 1, from mu on it is < 1.
inline double pmf_ratio(const DSLParams& d, integer x) {
  const integer z = x - d.mu();
  if (z >= 0) {
    const double p = d.p();
    const double zz = static_cast<double>(z);
    return p * (1.0 + std::pow(p, zz)) / (1.0 + std::pow(p, zz + 2.0));
  }
  if (z <= -2) {
    const double q = d.q();
    const double zz = static_cast<double>(z);
    return (1.0 + std::pow(q, -zz)) / (q * (1.0 + std::pow(q, -zz - 2.0)));
  }
  return pmf(d, x + 1) / pmf(d, x);
}

/// Integer window [lo, hi] (offset by mu) outside of which each tail carries
/// less than tol of the mass; uses sf(B + 1) <= 2 p^{B+1} and its mirror.
inline std::pair<integer, integer> support_bound(const DSLParams& d,
                                                 double tol) {
  auto extent = [tol](double log_r) {
    const double b = std::log(tol / 2.0) / log_r;
    return static_cast<integer>(std::ceil(std::max(b, 0.0)));
  };
  return {d.mu() - 1 - extent(d.log_q()), d.mu() + extent(d.log_p())};
}

/**
 * Unguarded closed-form inversion of the cdf.
 *
 * gamma <= F(-1) = log p / log pq is served by the left-tail formula
 * ceil(log_q(2 log p / (gamma log pq) - 1)) - 1, everything above by the
 * right-tail formula ceil(log_p((1-gamma) log pq /
 * (2 log q - (1-gamma) log pq))) - 1. Exact ties cdf(x) == gamma can land
 * one step off in floating point; quantile() corrects that.
 */
inline integer quantile_closed_form(const DSLParams& d, double gamma) {
  detail::require_gamma(gamma);
  const double lpq = d.log_pq();
  double v;
  if (gamma <= d.mass_negative()) {
    v = std::ceil(std::log(2.0 * d.log_p() / (gamma * lpq) - 1.0) / d.log_q()) -
        1.0;
  } else {
    const double tail = (1.0 - gamma) * lpq;
    v = std::ceil(std::log(tail / (2.0 * d.log_q() - tail)) / d.log_p()) - 1.0;
  }
  return static_cast<integer>(v) + d.mu();
}

/// Smallest integer x with cdf(x) >= gamma.
inline integer quantile(const DSLParams& d, double gamma) {
  integer x = quantile_closed_form(d, gamma);
  while (cdf(d, x - 1) >= gamma) --x;
  while (cdf(d, x) < gamma) ++x;
  return x;
}

inline integer median(const DSLParams& d) { return quantile(d, 0.5); }

/// Search-based median alongside the published two-case closed form, whose
/// case split q > p^{(1+p)/(3p-1)} is singular at p = 1/3 and can pick a
/// branch with a negative logarithm argument (closed_form is then empty).
struct MedianCheck {
  integer median;
  std::optional<integer> closed_form;

  bool agrees() const noexcept {
    return closed_form.has_value() && *closed_form == median;
  }
};

inline MedianCheck median_check(const DSLParams& d) {
  MedianCheck out{median(d), std::nullopt};
  const double p = d.p();
  const double q = d.q();
  const double lpq = d.log_pq();
  if (3.0 * p - 1.0 == 0.0) return out;
  const double split = std::pow(p, (1.0 + p) / (3.0 * p - 1.0));
  double v;
  if (q > split) {
    v = std::ceil(std::log(lpq / std::log(q * q * q / p)) / d.log_p()) - 1.0;
  } else {
    v = std::ceil(std::log(std::log(p * p * p / q) / lpq) / d.log_q()) - 1.0;
  }
  if (std::isfinite(v)) out.closed_form = static_cast<integer>(v) + d.mu();
  return out;
}

/// {mu} if p > q, {mu - 1} if p < q, {mu - 1, mu} if p == q.
inline std::vector<integer> mode(const DSLParams& d) {
  if (d.p() > d.q()) return {d.mu()};
  if (d.p() < d.q()) return {d.mu() - 1};
  return {d.mu() - 1, d.mu()};
}

// ---------------------------------------------------------------------------
// Moments

enum class MomentMethod { paper_approx, exact_series };

struct MomentPair {
  double mean;
  double variance;
  MomentMethod method;
};

/**
 * Mean and variance from the continuous parent plus an independent
 * uniform(0,1) remainder: E = E(X_c) - 1/2 and V = V(X_c) + 1/12.
 * Approximate, because the fractional part is neither uniform nor
 * independent of the integer part.
 */
inline MomentPair mean_variance_paper(const DSLParams& d) {
  const double lp = d.log_p();
  const double lq = d.log_q();
  const double ln2 = std::numbers::ln2;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double cont_mean = 2.0 * ln2 * (lp - lq) / (lp * lq);
  const double cont_var =
      (lp * lp * lp + lq * lq * lq) / (d.log_pq() * lp * lp * lq * lq) *
          pi2 / 3.0 -
      cont_mean * cont_mean;
  return {cont_mean - 0.5 + static_cast<double>(d.mu()),
          cont_var + 1.0 / 12.0, MomentMethod::paper_approx};
}

/// Mean and variance by direct summation of x pmf(x) and x^2 pmf(x). Each
/// tail is cut once 4 r^m (m^2 + 2)/(1 - r)^2, a bound on the neglected
/// second-moment mass, drops below tol.
inline MomentPair mean_variance_exact(const DSLParams& d, double tol = 1e-15) {
  if (!(tol > 0.0)) throw domain_error("tolerance must be > 0");
  const DSLParams centred = d.with_mu(0);

  auto tail_extent = [tol](double r) {
    const double omr = 1.0 - r;
    integer m = 1;
    while (4.0 * std::pow(r, static_cast<double>(m)) *
               (static_cast<double>(m) * static_cast<double>(m) + 2.0) /
               (omr * omr) >=
           tol) {
      m = m < 64 ? m + 1 : m + m / 8;
    }
    return m;
  };
  const integer hi = tail_extent(d.p());
  const integer lo = -1 - tail_extent(d.q());

  // Sum outermost terms first.
  long double s1 = 0.0L, s2 = 0.0L;
  auto add = [&](integer x) {
    const long double w = pmf(centred, x);
    const long double xx = static_cast<long double>(x);
    s1 += xx * w;
    s2 += xx * xx * w;
  };
  for (integer x = hi; x >= 0; --x) add(x);
  for (integer x = lo; x <= -1; ++x) add(x);

  const double mean = static_cast<double>(s1);
  const double var = static_cast<double>(s2 - s1 * s1);
  return {mean + static_cast<double>(d.mu()), std::max(var, 0.0),
          MomentMethod::exact_series};
}

// ---------------------------------------------------------------------------
// Continuous parent SLogistic(kappa, beta)

/// F(0) = kappa^2 / (1 + kappa^2), the mass of the negative half-line.
inline double continuous_mass_negative(const ContinuousSLParams& c) noexcept {
  const double k2 = c.kappa() * c.kappa();
  return k2 / (1.0 + k2);
}

inline double continuous_pdf(const ContinuousSLParams& c, double x) {
  const double kappa = c.kappa();
  const double beta = c.beta();
  const double scale = x < 0.0 ? kappa * beta : beta / kappa;
  const double s = detail::sigmoid(x / scale);
  return 2.0 * kappa / (1.0 + kappa * kappa) * s * (1.0 - s) / beta;
}

inline double continuous_cdf(const ContinuousSLParams& c, double x) {
  const double f0 = continuous_mass_negative(c);
  if (x < 0.0) {
    return 2.0 * f0 * detail::sigmoid(x / (c.kappa() * c.beta()));
  }
  return f0 +
         2.0 * (1.0 - f0) *
             (detail::sigmoid(x * c.kappa() / c.beta()) - 0.5);
}

/// P(X > x), written directly from the exponential form of each half-line.
inline double continuous_sf(const ContinuousSLParams& c, double x) {
  const double kappa = c.kappa();
  const double beta = c.beta();
  const double k2 = kappa * kappa;
  if (x < 0.0) {
    return 1.0 - 2.0 * k2 / (1.0 + k2) / (1.0 + std::exp(-x / (kappa * beta)));
  }
  const double e = std::exp(-x * kappa / beta);
  return 2.0 / (1.0 + k2) * (e / (1.0 + e));
}

inline double continuous_quantile(const ContinuousSLParams& c, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw domain_error("continuous quantile requires 0 < u < 1");
  }
  const double f0 = continuous_mass_negative(c);
  if (u < f0) {
    const double w = u / (2.0 * f0);
    return c.kappa() * c.beta() * std::log(w / (1.0 - w));
  }
  const double upper = (1.0 - u) / (2.0 * (1.0 - f0));  // 1 - w
  return c.beta() / c.kappa() * std::log((1.0 - upper) / upper);
}

}  // namespace dslogistic
