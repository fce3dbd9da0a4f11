/**
 * @file estimation.hpp
 * @brief Method of proportion and maximum likelihood for DSLogistic(p, q).
 *
 * The log-likelihood of an iid sample (offsets z_i = x_i - mu) is
 *
 *   l = s- log(2 log p / log pq) + s+ log(2 log q / log pq)
 *       + sum_{z_i >= 0} g(p, z_i) + sum_{z_i < 0} g(q, -1 - z_i)
 *
 * with g the logistic-difference kernel of detail/numeric.hpp. Score and
 * Hessian are differentiated from this form; the optimizer runs on
 * logit(p), logit(q).
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "dslogistic/core.hpp"
#include "dslogistic/detail/numeric.hpp"
#include "dslogistic/optimize.hpp"
#include "dslogistic/sample.hpp"

namespace dslogistic {

// ---------------------------------------------------------------------------
// Result types

enum class FitMethod { mop, mle };
enum class InfoKind { observed, expected };

inline std::string_view to_string(FitMethod m) {
  return m == FitMethod::mop ? "MOP" : "MLE";
}

struct Estimate {
  std::string name;
  double value = 0.0;
  std::optional<double> se;
  std::optional<std::pair<double, double>> ci;
};

struct FitResult {
  std::string model;
  FitMethod method = FitMethod::mle;
  std::vector<Estimate> estimates;
  double loglik = -std::numeric_limits<double>::infinity();
  bool converged = false;
  /// Sample sits on one side of the junction; the supremum is on the edge
  /// of the parameter space.
  bool boundary = false;
  int iterations = 0;
  std::size_t n = 0;
  std::string note;

  const Estimate* find(std::string_view name) const {
    for (const auto& e : estimates) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
  const Estimate& at(std::string_view name) const {
    if (const auto* e = find(name)) return *e;
    throw std::out_of_range("no estimate named " + std::string(name));
  }
  double value(std::string_view name) const { return at(name).value; }

  bool has_standard_errors() const {
    for (const auto& e : estimates) {
      if (e.se) return true;
    }
    return false;
  }
};

/// Negated Hessian of the log-likelihood in (p, q).
struct InfoMatrix {
  double pp = 0.0;
  double pq = 0.0;
  double qq = 0.0;

  double determinant() const noexcept { return pp * qq - pq * pq; }
  bool positive_definite() const noexcept {
    return pp > 0.0 && determinant() > 0.0 && std::isfinite(determinant());
  }
  /// sqrt of the diagonal of the inverse, if the matrix is positive definite.
  std::optional<std::pair<double, double>> standard_errors() const {
    if (!positive_definite()) return std::nullopt;
    const double det = determinant();
    return std::pair{std::sqrt(qq / det), std::sqrt(pp / det)};
  }
};

struct Score {
  double dp = 0.0;
  double dq = 0.0;
};

struct FitOptions {
  OptimizerOptions optimizer{};
  double ci_level = 0.95;
  InfoKind info = InfoKind::observed;
};

/// Two-sided normal quantile z_{1 - alpha/2} for a CI at `level`.
inline double wald_z(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw domain_error("confidence level must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal(), 0.5 + level / 2.0);
}

inline Estimate make_estimate(std::string name, double value,
                              std::optional<double> se, double z) {
  Estimate e{std::move(name), value, se, std::nullopt};
  if (se) e.ci = std::pair{value - z * *se, value + z * *se};
  return e;
}

// ---------------------------------------------------------------------------
// Likelihood and derivatives

/// Sum of log pmf in the grouped form.
inline double loglik(const DSLParams& d, const IntSample& s) {
  double neg = 0.0, nonneg = 0.0, kernels = 0.0;
  for (const auto& [x, count] : s.cells()) {
    const integer z = x - d.mu();
    const double c = static_cast<double>(count);
    if (z >= 0) {
      nonneg += c;
      kernels += c * detail::logistic_kernel_value(d.p(), d.log_p(),
                                                   static_cast<double>(z));
    } else {
      neg += c;
      kernels += c * detail::logistic_kernel_value(d.q(), d.log_q(),
                                                   static_cast<double>(-1 - z));
    }
  }
  const double l = neg * std::log(2.0 * d.mass_negative()) +
                   nonneg * std::log(2.0 * d.mass_nonnegative()) + kernels;
  return std::isfinite(l) ? l : -std::numeric_limits<double>::infinity();
}

/// Sum of log pmf(x_i), one observation at a time.
inline double loglik_naive(const DSLParams& d, const IntSample& s) {
  double l = 0.0;
  for (integer x : s.values()) l += std::log(pmf(d, x));
  return std::isfinite(l) ? l : -std::numeric_limits<double>::infinity();
}

namespace detail {

struct Derivatives {
  Score score;
  double hpp = 0.0, hpq = 0.0, hqq = 0.0;  // Hessian of l
};

/// Accumulates the derivatives of log pmf for `count` observations at
/// offset z.
inline void accumulate(const DSLParams& d, integer z, double count,
                       Derivatives& out) {
  const double p = d.p(), q = d.q();
  const double lp = d.log_p(), lq = d.log_q(), lpq = d.log_pq();
  const double l2 = lpq * lpq;

  // -log(-log pq): shared by both branches
  out.score.dp += count * (-1.0 / (p * lpq));
  out.score.dq += count * (-1.0 / (q * lpq));
  out.hpp += count * (lpq + 1.0) / (p * p * l2);
  out.hqq += count * (lpq + 1.0) / (q * q * l2);
  out.hpq += count / (p * q * l2);

  if (z >= 0) {
    const auto g = logistic_kernel(p, lp, static_cast<double>(z));
    out.score.dp += count * g.d1;
    out.hpp += count * g.d2;
    // log(-log q)
    out.score.dq += count / (q * lq);
    out.hqq -= count * (lq + 1.0) / ((q * lq) * (q * lq));
  } else {
    const auto g = logistic_kernel(q, lq, static_cast<double>(-1 - z));
    out.score.dq += count * g.d1;
    out.hqq += count * g.d2;
    out.score.dp += count / (p * lp);
    out.hpp -= count * (lp + 1.0) / ((p * lp) * (p * lp));
  }
}

inline Derivatives derivatives(const DSLParams& d, const IntSample& s) {
  Derivatives out;
  for (const auto& [x, count] : s.cells()) {
    accumulate(d, x - d.mu(), static_cast<double>(count), out);
  }
  return out;
}

}  // namespace detail

/// Gradient of loglik with respect to (p, q).
inline Score score(const DSLParams& d, const IntSample& s) {
  return detail::derivatives(d, s).score;
}

/// Observed information: minus the analytic Hessian of loglik in (p, q).
inline InfoMatrix observed_info(const DSLParams& d, const IntSample& s) {
  const auto h = detail::derivatives(d, s);
  return {-h.hpp, -h.hpq, -h.hqq};
}

/// n times the per-observation Fisher information, summing each branch's
/// second derivatives against the pmf until the tail mass drops below 1e-15.
inline InfoMatrix expected_info(const DSLParams& d, std::size_t n) {
  const DSLParams c = d.with_mu(0);
  const auto [lo, hi] = support_bound(c, 1e-15);
  detail::Derivatives acc;
  for (integer z = lo; z <= hi; ++z) {
    detail::accumulate(c, z, pmf(c, z), acc);
  }
  const double nn = static_cast<double>(n);
  return {-nn * acc.hpp, -nn * acc.hpq, -nn * acc.hqq};
}

// ---------------------------------------------------------------------------
// Method of proportion

/// The method of proportion has no solution for this sample.
class MopInapplicable : public std::runtime_error {
 public:
  enum class Reason { empty, all_negative, no_zeros, no_positive, no_negative };

  MopInapplicable(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// The proportion equations solved for (p, q); no validation.
inline std::pair<double, double> mop_from_proportions(double r0, double r_plus,
                                                      double r_minus) {
  const double p = (r_plus - r0) / (r_plus + r0);
  return {p, std::pow(p, r_plus / r_minus)};
}

/**
 * p~ = (r+ - r0) / (r+ + r0),  q~ = p~^(r+ / r-)
 *
 * with r0, r+ and r- the sample proportions of zeros, nonnegative and
 * negative values. Inverts P(X=0) = (1-p) log q / ((1+p) log pq),
 * P(X>=0) = log q / log pq and P(X<=-1) = log p / log pq.
 */
inline FitResult fit_mop(const IntSample& s) {
  using R = MopInapplicable::Reason;
  if (s.empty()) throw MopInapplicable(R::empty, "MOP inapplicable: empty sample");
  if (s.s_plus() == 0) {
    throw MopInapplicable(R::all_negative,
                          "MOP inapplicable: all observations are negative "
                          "(nonnegative count is 0)");
  }
  if (s.zeros() == 0) {
    throw MopInapplicable(R::no_zeros,
                          "MOP inapplicable: sample contains no zeros "
                          "(zero count is 0)");
  }
  if (s.s_plus() == s.zeros()) {
    throw MopInapplicable(R::no_positive,
                          "MOP inapplicable: no strictly positive "
                          "observations (p estimate would be 0)");
  }
  if (s.s_minus() == 0) {
    throw MopInapplicable(R::no_negative,
                          "MOP inapplicable: no negative observations "
                          "(negative count is 0)");
  }
  const double n = static_cast<double>(s.size());
  const auto [p, q] = mop_from_proportions(static_cast<double>(s.zeros()) / n,
                                           static_cast<double>(s.s_plus()) / n,
                                           static_cast<double>(s.s_minus()) / n);

  FitResult out;
  out.model = "dslog";
  out.method = FitMethod::mop;
  out.n = s.size();
  out.estimates = {{"p", p, std::nullopt, std::nullopt},
                   {"q", q, std::nullopt, std::nullopt}};
  out.converged = p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0;
  if (out.converged) out.loglik = loglik(DSLParams(p, q), s);
  return out;
}

// ---------------------------------------------------------------------------
// Maximum likelihood

/**
 * Maximizes loglik over (0,1)^2 for fixed location mu.
 *
 * Starts from `init`, else the MOP estimate when it exists, else (0.5, 0.5).
 * Samples lying entirely on one side of mu are flagged `boundary` and never
 * reported as converged; the best interior point found is returned.
 */
inline FitResult fit_mle(const IntSample& s,
                         std::optional<DSLParams> init = std::nullopt,
                         const FitOptions& opts = {}, integer mu = 0) {
  if (s.empty()) throw domain_error("fit_mle requires a nonempty sample");
  const IntSample centred = mu == 0 ? s : s.shifted(mu);

  double p0 = 0.5, q0 = 0.5;
  if (init) {
    p0 = init->p();
    q0 = init->q();
  } else {
    try {
      const auto mop = fit_mop(centred);
      const double mp = mop.value("p"), mq = mop.value("q");
      if (mp > 1e-6 && mp < 1 - 1e-6 && mq > 1e-6 && mq < 1 - 1e-6) {
        p0 = mp;
        q0 = mq;
      }
    } catch (const MopInapplicable&) {
    }
  }

  constexpr double theta_limit = 30.0;
  auto objective = [&centred](const Vec<2>& theta, Vec<2>& grad) {
    if (std::abs(theta[0]) > theta_limit || std::abs(theta[1]) > theta_limit) {
      grad = {0.0, 0.0};
      return -std::numeric_limits<double>::infinity();
    }
    const double p = detail::sigmoid(theta[0]);
    const double q = detail::sigmoid(theta[1]);
    const DSLParams d(p, q);
    const Score sc = score(d, centred);
    grad = {sc.dp * p * (1.0 - p), sc.dq * q * (1.0 - q)};
    return loglik(d, centred);
  };
  auto logit = [](double v) { return std::log(v / (1.0 - v)); };
  const auto opt =
      maximize_bfgs<2>(objective, Vec<2>{logit(p0), logit(q0)}, opts.optimizer);

  const double p = detail::sigmoid(opt.x[0]);
  const double q = detail::sigmoid(opt.x[1]);
  const DSLParams fitted(p, q);

  FitResult out;
  out.model = "dslog";
  out.method = FitMethod::mle;
  out.n = s.size();
  out.iterations = opt.iterations;
  out.loglik = opt.value;
  out.boundary = centred.s_minus() == 0 || centred.s_plus() == 0;
  out.converged = opt.converged && !out.boundary;

  std::optional<std::pair<double, double>> se;
  if (!out.boundary) {
    const InfoMatrix info = opts.info == InfoKind::observed
                                ? observed_info(fitted, centred)
                                : expected_info(fitted, centred.size());
    se = info.standard_errors();
    if (!se) out.note = "information matrix not positive definite; SEs omitted";
  } else {
    out.note = centred.s_plus() == 0
                   ? "no observations at or above mu; maximum on the boundary"
                   : "no observations below mu; maximum on the boundary";
  }
  if (!opt.converged && out.note.empty()) {
    out.note = "optimizer did not reach the gradient tolerance";
  }

  const double z = wald_z(opts.ci_level);
  out.estimates.push_back(make_estimate(
      "p", p, se ? std::optional<double>(se->first) : std::nullopt, z));
  out.estimates.push_back(make_estimate(
      "q", q, se ? std::optional<double>(se->second) : std::nullopt, z));
  if (mu != 0) {
    out.estimates.insert(out.estimates.begin(),
                         Estimate{"mu", static_cast<double>(mu), std::nullopt,
                                  std::nullopt});
  }
  return out;
}

/// Profile likelihood over integer mu in [min(x), max(x)]; the winner is
/// refitted and reported with mu as an (SE-free) estimate.
inline FitResult fit_mu_profile(const IntSample& s, const FitOptions& opts = {}) {
  if (s.size() < 2) throw domain_error("fit_mu_profile requires n >= 2");
  std::optional<FitResult> best;
  integer best_mu = 0;
  for (integer mu = s.min(); mu <= s.max(); ++mu) {
    auto r = fit_mle(s, std::nullopt, opts, mu);
    if (!best || r.loglik > best->loglik) {
      best = std::move(r);
      best_mu = mu;
    }
  }
  FitResult out = std::move(*best);
  if (const Estimate* e = out.find("mu"); e == nullptr) {
    out.estimates.insert(out.estimates.begin(),
                         Estimate{"mu", static_cast<double>(best_mu),
                                  std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace dslogistic
