/**
 * @file competitors.hpp
 * @brief Reference integer-valued laws used for model comparison:
 *        discrete logistic DLog(p, mu), discrete Laplace DLaplace(p, q) and
 *        Roy's discrete normal DNorm(mu, sigma), each with an MLE fit.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "dslogistic/detail/numeric.hpp"
#include "dslogistic/estimation.hpp"
#include "dslogistic/optimize.hpp"
#include "dslogistic/sample.hpp"

namespace dslogistic {

struct DLogParams {
  double p;
  double mu;

  DLogParams(double p_, double mu_) : p(p_), mu(mu_) {
    detail::require_open_unit("p", p);
    if (!std::isfinite(mu)) throw domain_error("mu must be finite");
  }
};

struct DLaplaceParams {
  double p;
  double q;

  DLaplaceParams(double p_, double q_) : p(p_), q(q_) {
    detail::require_open_unit("p", p);
    detail::require_open_unit("q", q);
  }
};

struct DNormParams {
  double mu;
  double sigma;

  DNormParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!std::isfinite(mu)) throw domain_error("mu must be finite");
    detail::require_positive("sigma", sigma);
  }
};

// ---------------------------------------------------------------------------
// DLog: (1-p) p^{y-mu} / ((1 + p^{y-mu})(1 + p^{y-mu+1}))

inline double dlog_log_pmf(const DLogParams& d, integer y) {
  return detail::logistic_kernel_value(d.p, std::log(d.p),
                                       static_cast<double>(y) - d.mu);
}

inline double dlog_pmf(const DLogParams& d, integer y) {
  return std::exp(dlog_log_pmf(d, y));
}

// ---------------------------------------------------------------------------
// DLaplace: log p q^{-(x+1)} (1-q) / log pq for x < 0,
//           log q p^x (1-p) / log pq for x >= 0

inline double dlaplace_log_pmf(const DLaplaceParams& d, integer x) {
  const double lp = std::log(d.p), lq = std::log(d.q), lpq = lp + lq;
  if (x >= 0) {
    return std::log(lq / lpq) + std::log1p(-d.p) + static_cast<double>(x) * lp;
  }
  return std::log(lp / lpq) + std::log1p(-d.q) +
         static_cast<double>(-(x + 1)) * lq;
}

inline double dlaplace_pmf(const DLaplaceParams& d, integer x) {
  return std::exp(dlaplace_log_pmf(d, x));
}

// ---------------------------------------------------------------------------
// DNorm: Phi((y + 1 - mu)/sigma) - Phi((y - mu)/sigma)

namespace detail {

/// Standard normal upper tail 1 - Phi(x) via erfc, accurate in both tails.
inline double normal_upper(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Phi(b) - Phi(a) for a < b without cancellation in either tail.
inline double normal_interval(double a, double b) {
  if (a >= 0.0) return normal_upper(a) - normal_upper(b);
  if (b <= 0.0) return normal_upper(-b) - normal_upper(-a);
  return 1.0 - normal_upper(b) - normal_upper(-a);
}

}  // namespace detail

/// Standard normal cdf.
inline double normal_cdf(double x) { return detail::normal_upper(-x); }

inline double dnorm_pmf(const DNormParams& d, integer y) {
  const double a = (static_cast<double>(y) - d.mu) / d.sigma;
  return detail::normal_interval(a, a + 1.0 / d.sigma);
}

inline double dnorm_log_pmf(const DNormParams& d, integer y) {
  return std::log(dnorm_pmf(d, y));
}

// ---------------------------------------------------------------------------
// Fitting

enum class Model { dslog, dlog, dlaplace, dnorm };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::dslog: return "dslog";
    case Model::dlog: return "dlog";
    case Model::dlaplace: return "dlaplace";
    case Model::dnorm: return "dnorm";
  }
  return "?";
}

inline std::optional<Model> parse_model(std::string_view s) {
  if (s == "dslog") return Model::dslog;
  if (s == "dlog") return Model::dlog;
  if (s == "dlaplace") return Model::dlaplace;
  if (s == "dnorm") return Model::dnorm;
  return std::nullopt;
}

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Log-likelihood and gradient of a two-parameter competitor in its natural
/// coordinates; returns -inf outside the parameter space.
inline double dlog_loglik_grad(const IntSample& s, double mu, double p,
                               Vec<2>& grad) {
  grad = {0.0, 0.0};
  if (!(p > 0.0 && p < 1.0)) return kNegInf;
  const double lp = std::log(p);
  double l = 0.0;
  for (const auto& [y, count] : s.cells()) {
    const double c = static_cast<double>(count);
    const double z = static_cast<double>(y) - mu;
    const auto g = logistic_kernel(p, lp, z);
    l += c * g.value;
    grad[0] += c * lp * (-1.0 + sigmoid(z * lp) + sigmoid((z + 1.0) * lp));
    grad[1] += c * g.d1;
  }
  return l;
}

inline double dlaplace_loglik_grad(const IntSample& s, double p, double q,
                                   Vec<2>& grad) {
  grad = {0.0, 0.0};
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) return kNegInf;
  const double lp = std::log(p), lq = std::log(q), lpq = lp + lq;
  const double np = static_cast<double>(s.s_plus());
  const double nm = static_cast<double>(s.s_minus());
  double sum_pos = 0.0, sum_neg = 0.0;
  for (integer x : s.values()) {
    if (x >= 0) {
      sum_pos += static_cast<double>(x);
    } else {
      sum_neg += static_cast<double>(-(x + 1));
    }
  }
  const double l = np * (std::log(lq / lpq) + std::log1p(-p)) + sum_pos * lp +
                   nm * (std::log(lp / lpq) + std::log1p(-q)) + sum_neg * lq;
  const double n = np + nm;
  grad[0] = -n / (p * lpq) + nm / (p * lp) - np / (1.0 - p) + sum_pos / p;
  grad[1] = -n / (q * lpq) + np / (q * lq) - nm / (1.0 - q) + sum_neg / q;
  return l;
}

inline double dnorm_loglik_grad(const IntSample& s, double mu, double sigma,
                                Vec<2>& grad) {
  grad = {0.0, 0.0};
  if (!(sigma > 0.0) || !std::isfinite(mu)) return kNegInf;
  double l = 0.0;
  for (const auto& [y, count] : s.cells()) {
    const double c = static_cast<double>(count);
    const double a = (static_cast<double>(y) - mu) / sigma;
    const double b = a + 1.0 / sigma;
    const double mass = normal_interval(a, b);
    if (!(mass > 0.0)) return kNegInf;
    const double fa = normal_density(a), fb = normal_density(b);
    l += c * std::log(mass);
    grad[0] += -c * (fb - fa) / (sigma * mass);
    grad[1] += -c * (b * fb - a * fa) / (sigma * mass);
  }
  return l;
}

/// Observed information from central differences of an analytic gradient.
template <class Grad>
InfoMatrix numeric_info(Grad&& grad, Vec<2> x, Vec<2> step) {
  std::array<Vec<2>, 2> rows{};
  for (std::size_t i = 0; i < 2; ++i) {
    Vec<2> up = x, dn = x, gu{}, gd{};
    up[i] += step[i];
    dn[i] -= step[i];
    grad(up, gu);
    grad(dn, gd);
    for (std::size_t j = 0; j < 2; ++j) {
      rows[i][j] = (gu[j] - gd[j]) / (2.0 * step[i]);
    }
  }
  return {-rows[0][0], -0.5 * (rows[0][1] + rows[1][0]), -rows[1][1]};
}

inline double unit_step(double v) { return 1e-5 * std::min({1.0, v, 1.0 - v}); }

template <class Natural>
FitResult finish_competitor(Model model, const IntSample& s,
                            const OptimizerResult<2>& opt, Vec<2> natural,
                            Natural&& natural_grad, Vec<2> step,
                            const char* name0, const char* name1,
                            const FitOptions& opts) {
  FitResult out;
  out.model = std::string(to_string(model));
  out.method = FitMethod::mle;
  out.n = s.size();
  out.iterations = opt.iterations;
  out.loglik = opt.value;
  out.converged = opt.converged;
  const auto se = numeric_info(natural_grad, natural, step).standard_errors();
  if (!se) out.note = "information matrix not positive definite; SEs omitted";
  if (!opt.converged && out.note.empty()) {
    out.note = "optimizer did not reach the gradient tolerance";
  }
  const double z = wald_z(opts.ci_level);
  out.estimates.push_back(make_estimate(
      name0, natural[0], se ? std::optional<double>(se->first) : std::nullopt,
      z));
  out.estimates.push_back(make_estimate(
      name1, natural[1], se ? std::optional<double>(se->second) : std::nullopt,
      z));
  return out;
}

inline double logit(double v) { return std::log(v / (1.0 - v)); }

}  // namespace detail

/// Discrete logistic MLE over (mu, p); mu is real-valued.
inline FitResult fit_dlog(const IntSample& s, const FitOptions& opts = {}) {
  const double var = std::max(s.variance() - 1.0 / 12.0, 0.25);
  const double scale = std::sqrt(3.0 * var) / std::numbers::pi;
  const double p0 = std::clamp(std::exp(-1.0 / scale), 0.05, 0.95);
  auto objective = [&s](const Vec<2>& t, Vec<2>& g) {
    const double p = detail::sigmoid(t[1]);
    const double l = detail::dlog_loglik_grad(s, t[0], p, g);
    g[1] *= p * (1.0 - p);
    return l;
  };
  const auto opt = maximize_bfgs<2>(
      objective, Vec<2>{s.mean() + 0.5, detail::logit(p0)}, opts.optimizer);
  const Vec<2> nat{opt.x[0], detail::sigmoid(opt.x[1])};
  auto grad = [&s](const Vec<2>& x, Vec<2>& g) {
    detail::dlog_loglik_grad(s, x[0], x[1], g);
  };
  return detail::finish_competitor(
      Model::dlog, s, opt, nat, grad,
      Vec<2>{1e-5 * std::max(1.0, std::abs(nat[0])), detail::unit_step(nat[1])},
      "mu", "p", opts);
}

/// Discrete Laplace MLE over (p, q).
inline FitResult fit_dlaplace(const IntSample& s, const FitOptions& opts = {}) {
  auto objective = [&s](const Vec<2>& t, Vec<2>& g) {
    const double p = detail::sigmoid(t[0]), q = detail::sigmoid(t[1]);
    const double l = detail::dlaplace_loglik_grad(s, p, q, g);
    g[0] *= p * (1.0 - p);
    g[1] *= q * (1.0 - q);
    return l;
  };
  const auto opt = maximize_bfgs<2>(objective, Vec<2>{0.0, 0.0}, opts.optimizer);
  const Vec<2> nat{detail::sigmoid(opt.x[0]), detail::sigmoid(opt.x[1])};
  auto grad = [&s](const Vec<2>& x, Vec<2>& g) {
    detail::dlaplace_loglik_grad(s, x[0], x[1], g);
  };
  auto out = detail::finish_competitor(
      Model::dlaplace, s, opt, nat, grad,
      Vec<2>{detail::unit_step(nat[0]), detail::unit_step(nat[1])}, "p", "q",
      opts);
  if (s.s_minus() == 0 || s.s_plus() == 0) {
    out.boundary = true;
    out.converged = false;
  }
  return out;
}

/// Roy's discrete normal MLE over (mu, sigma); optimized in (mu, log sigma).
inline FitResult fit_dnorm(const IntSample& s, const FitOptions& opts = {}) {
  auto objective = [&s](const Vec<2>& t, Vec<2>& g) {
    const double sigma = std::exp(t[1]);
    const double l = detail::dnorm_loglik_grad(s, t[0], sigma, g);
    g[1] *= sigma;
    return l;
  };
  const double sd0 = std::sqrt(std::max(s.variance() - 1.0 / 12.0, 0.25));
  const auto opt = maximize_bfgs<2>(
      objective, Vec<2>{s.mean() + 0.5, std::log(sd0)}, opts.optimizer);
  const Vec<2> nat{opt.x[0], std::exp(opt.x[1])};
  auto grad = [&s](const Vec<2>& x, Vec<2>& g) {
    detail::dnorm_loglik_grad(s, x[0], x[1], g);
  };
  return detail::finish_competitor(
      Model::dnorm, s, opt, nat, grad,
      Vec<2>{1e-5 * std::max(1.0, std::abs(nat[0])), 1e-5 * nat[1]}, "mu",
      "sigma", opts);
}

inline FitResult fit_competitor(Model model, const IntSample& s,
                                const FitOptions& opts = {}) {
  if (s.size() < 2) throw domain_error("model fitting requires n >= 2");
  switch (model) {
    case Model::dslog: return fit_mle(s, std::nullopt, opts);
    case Model::dlog: return fit_dlog(s, opts);
    case Model::dlaplace: return fit_dlaplace(s, opts);
    case Model::dnorm: return fit_dnorm(s, opts);
  }
  throw domain_error("unknown model");
}

}  // namespace dslogistic
