#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace dslogistic {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

struct OptimizerOptions {
  int max_iterations = 500;
  /// Converged once max|grad| <= gradient_tolerance * max(1, |f|).
  double gradient_tolerance = 1e-8;
  /// Largest coordinate move per iteration (unconstrained coordinates).
  double max_step = 4.0;
};

template <std::size_t N>
struct OptimizerResult {
  Vec<N> x{};
  double value = 0.0;
  Vec<N> gradient{};
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <std::size_t N>
double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
double max_abs(const Vec<N>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

template <std::size_t N>
Mat<N> identity(double scale = 1.0) {
  Mat<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = scale;
  return m;
}

template <std::size_t N>
bool gradient_small(const Vec<N>& g, double value, double tol) {
  return std::isfinite(value) &&
         max_abs(g) <= tol * std::max(1.0, std::abs(value));
}

}  // namespace detail

/**
 * Maximize f over R^N by BFGS with Armijo backtracking.
 *
 * `f(x, grad)` returns the objective and writes its gradient. Non-finite
 * objective values are treated as infeasible and rejected by the line search.
 */
template <std::size_t N, class F>
OptimizerResult<N> maximize_bfgs(F&& f, Vec<N> x,
                                 const OptimizerOptions& opts = {}) {
  using detail::dot;

  OptimizerResult<N> res;
  Vec<N> grad{};
  double value = f(x, grad);

  // Work with phi = -f throughout.
  Vec<N> g{};
  for (std::size_t i = 0; i < N; ++i) g[i] = -grad[i];

  Mat<N> h = detail::identity<N>();
  bool fresh = true;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (detail::gradient_small(grad, value, opts.gradient_tolerance)) break;

    Vec<N> dir{};
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) dir[i] -= h[i][j] * g[j];
    }
    if (dot(dir, g) >= 0.0) {
      h = detail::identity<N>();
      fresh = true;
      for (std::size_t i = 0; i < N; ++i) dir[i] = -g[i];
    }
    const double len = detail::max_abs(dir);
    if (len > opts.max_step) {
      for (auto& v : dir) v *= opts.max_step / len;
    }

    const double slope = dot(g, dir);
    double t = 1.0;
    Vec<N> x_new{}, grad_new{};
    double value_new = 0.0;
    bool accepted = false;
    while (t > 1e-16) {
      for (std::size_t i = 0; i < N; ++i) x_new[i] = x[i] + t * dir[i];
      value_new = f(x_new, grad_new);
      if (std::isfinite(value_new) && -value_new <= -value + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;  // steepest ascent made no progress either
      h = detail::identity<N>();
      fresh = true;
      continue;
    }

    Vec<N> s{}, y{};
    for (std::size_t i = 0; i < N; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = -grad_new[i] - g[i];
    }
    x = x_new;
    value = value_new;
    grad = grad_new;
    for (std::size_t i = 0; i < N; ++i) g[i] = -grad[i];

    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (fresh) h = detail::identity<N>(sy / dot(y, y));
      const double rho = 1.0 / sy;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      Vec<N> hy{};
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) hy[i] += h[i][j] * y[j];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
          h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                     (rho * rho * yhy + rho) * s[i] * s[j];
        }
      }
      fresh = false;
    }
  }

  res.x = x;
  res.value = value;
  res.gradient = grad;
  res.iterations = it;
  res.converged = detail::gradient_small(grad, value, opts.gradient_tolerance);
  return res;
}

}  // namespace dslogistic
