/**
 * @file params.hpp
 * @brief Parameter types for the discrete skew logistic law and its
 *        continuous parent, plus the error types used across the library.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dslogistic {

using integer = std::int64_t;

/// Raised when a parameter or argument falls outside its domain.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_open_unit(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " must satisfy 0 < " << name << " < 1 (got " << v << ")";
    throw domain_error(os.str());
  }
}

inline void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and > 0 (got " << v << ")";
    throw domain_error(os.str());
  }
}

}  // namespace detail

/**
 * Skew pair (p, q) with integer location mu.
 *
 * p governs the right tail (x - mu >= 0), q the left tail. Both lie strictly
 * inside (0, 1); the boundary values are rejected because the normalizing
 * ratios log p / log(pq) and log q / log(pq) degenerate there.
 */
class DSLParams {
 public:
  DSLParams(double p, double q, integer mu = 0) : p_(p), q_(q), mu_(mu) {
    detail::require_open_unit("p", p);
    detail::require_open_unit("q", q);
    log_p_ = std::log(p);
    log_q_ = std::log(q);
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  integer mu() const noexcept { return mu_; }

  double log_p() const noexcept { return log_p_; }
  double log_q() const noexcept { return log_q_; }
  double log_pq() const noexcept { return log_p_ + log_q_; }

  /// P(X - mu <= -1) = log p / log(pq).
  double mass_negative() const noexcept { return log_p_ / log_pq(); }
  /// P(X - mu >= 0) = log q / log(pq).
  double mass_nonnegative() const noexcept { return log_q_ / log_pq(); }

  DSLParams with_mu(integer mu) const { return {p_, q_, mu}; }

  friend bool operator==(const DSLParams& a, const DSLParams& b) noexcept {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.mu_ == b.mu_;
  }

 private:
  double p_;
  double q_;
  integer mu_;
  double log_p_ = 0.0;
  double log_q_ = 0.0;
};

/// Skew kappa and scale beta of the continuous skew logistic parent.
class ContinuousSLParams {
 public:
  ContinuousSLParams(double kappa, double beta) : kappa_(kappa), beta_(beta) {
    detail::require_positive("kappa", kappa);
    detail::require_positive("beta", beta);
  }

  double kappa() const noexcept { return kappa_; }
  double beta() const noexcept { return beta_; }

 private:
  double kappa_;
  double beta_;
};

/// p = exp(-kappa/beta), q = exp(-1/(kappa beta)).
inline DSLParams params_from_continuous(const ContinuousSLParams& c,
                                        integer mu = 0) {
  return {std::exp(-c.kappa() / c.beta()),
          std::exp(-1.0 / (c.kappa() * c.beta())), mu};
}

/// kappa = sqrt(log p / log q), beta = 1 / sqrt(log p log q).
inline ContinuousSLParams params_to_continuous(const DSLParams& d) {
  return {std::sqrt(d.log_p() / d.log_q()),
          1.0 / std::sqrt(d.log_p() * d.log_q())};
}

}  // namespace dslogistic
