#pragma once

#include <cmath>

namespace dslogistic::detail {

/// 1 / (1 + exp(-t)) without overflow.
inline double sigmoid(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(1 + exp(t)) without overflow.
inline double softplus(double t) noexcept {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

/**
 * Logistic-difference kernel shared by both branches of the pmf and by the
 * symmetric discrete logistic competitor:
 *
 *   g(r, k) = log[(1 - r) r^k / ((1 + r^k)(1 + r^{k+1}))]
 *           = log[r^k/(1+r^k) - r^{k+1}/(1+r^{k+1})]
 *
 * evaluated in the product form, which does not cancel for large |k|.
 * k may be any real; log_r = log r < 0.
 */
struct LogisticKernel {
  double value;
  double d1;  // dg/dr
  double d2;  // d2g/dr2
};

inline double logistic_kernel_value(double r, double log_r, double k) noexcept {
  return std::log1p(-r) + k * log_r - softplus(k * log_r) -
         softplus((k + 1.0) * log_r);
}

inline LogisticKernel logistic_kernel(double r, double log_r,
                                      double k) noexcept {
  const double t0 = k * log_r;
  const double t1 = (k + 1.0) * log_r;
  const double s0p = sigmoid(t0);   // r^k / (1 + r^k)
  const double s0m = sigmoid(-t0);  // 1 / (1 + r^k)
  const double s1p = sigmoid(t1);
  const double s1m = sigmoid(-t1);
  const double one_m_r = 1.0 - r;
  const double r2 = r * r;

  LogisticKernel out{};
  out.value = std::log1p(-r) + t0 - softplus(t0) - softplus(t1);
  out.d1 = -1.0 / one_m_r + (k / r) * s0m - ((k + 1.0) / r) * s1p;
  out.d2 = -1.0 / (one_m_r * one_m_r) -
           (k / r2) * s0m * (s0m + (k + 1.0) * s0p) +
           ((k + 1.0) / r2) * s1p * (s1p - k * s1m);
  return out;
}

}  // namespace dslogistic::detail
