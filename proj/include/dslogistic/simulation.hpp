/**
 * @file simulation.hpp
 * @brief Monte Carlo study of the MLE and method-of-proportion estimators.
 *
 * For every scenario (p, q, n) and replicate r a sample of size n is drawn by
 * inversion from the stream SeededStream::split(master_seed, scenario.index,
 * r), fitted by MLE and MOP, and the per-parameter bias, MSE, average CI
 * width (aw) and coverage (CL) are aggregated. Failed fits are counted and
 * left out of the averages.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dslogistic/estimation.hpp"
#include "dslogistic/sampling.hpp"

namespace dslogistic {

/// Multiplier applied to the SE for aw and CL.
enum class CoverageMultiplier {
  literal_1_96,  ///< 1.96 regardless of ci_level
  exact_z,       ///< z_{1 - alpha/2} for ci_level
};

struct Scenario {
  DSLParams truth;
  std::size_t n = 100;
  std::size_t replicates = 200;
  std::uint64_t master_seed = 0;
  double ci_level = 0.95;
  /// Position in the grid; selects the stream family.
  std::uint64_t index = 0;
};

struct SimOptions {
  CoverageMultiplier multiplier = CoverageMultiplier::literal_1_96;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  FitOptions fit{};
};

/// Aggregates for one parameter under one method.
struct CellSummary {
  std::size_t count = 0;
  double bias = 0.0;
  double mse = 0.0;
  double bias_se = 0.0;  ///< Monte Carlo standard error of bias
  double mse_se = 0.0;   ///< Monte Carlo standard error of mse
  double variance = 0.0; ///< population variance of the estimates
  std::optional<double> avg_width;
  std::optional<double> width_se;
  std::optional<double> coverage;
  std::size_t interval_count = 0;
};

struct MethodSummary {
  CellSummary p;
  CellSummary q;
  std::size_t failures = 0;
};

struct SimReport {
  Scenario scenario;
  MethodSummary mle;
  MethodSummary mop;
  /// Converged MLE fits whose information matrix was not invertible.
  std::size_t mle_missing_se = 0;
};

/// One replicate's estimates; kept for inspection and tests.
struct ReplicateOutcome {
  bool mle_ok = false;
  double mle_p = 0.0, mle_q = 0.0;
  std::optional<double> se_p, se_q;
  bool mop_ok = false;
  double mop_p = 0.0, mop_q = 0.0;
};

inline ReplicateOutcome run_replicate(const Scenario& sc, std::uint64_t r,
                                      const FitOptions& fit) {
  SeededStream stream = SeededStream::split(sc.master_seed, sc.index, r);
  const IntSample s = sample_inversion(sc.truth.with_mu(0), stream, sc.n);

  ReplicateOutcome out;
  std::optional<DSLParams> init;
  try {
    const auto mop = fit_mop(s);
    if (mop.converged) {
      out.mop_ok = true;
      out.mop_p = mop.value("p");
      out.mop_q = mop.value("q");
      init.emplace(out.mop_p, out.mop_q);
    }
  } catch (const MopInapplicable&) {
  }
  const auto mle = fit_mle(s, init, fit);
  if (mle.converged) {
    out.mle_ok = true;
    out.mle_p = mle.value("p");
    out.mle_q = mle.value("q");
    out.se_p = mle.at("p").se;
    out.se_q = mle.at("q").se;
  }
  return out;
}

namespace detail {

inline CellSummary summarize(const std::vector<double>& est, double truth,
                             const std::vector<std::optional<double>>* ses,
                             double z) {
  CellSummary c;
  c.count = est.size();
  if (est.empty()) return c;
  const double m = static_cast<double>(est.size());
  double sum_e = 0.0, sum_e2 = 0.0;
  for (double v : est) {
    const double e = v - truth;
    sum_e += e;
    sum_e2 += e * e;
  }
  c.bias = sum_e / m;
  c.mse = sum_e2 / m;
  c.variance = std::max(c.mse - c.bias * c.bias, 0.0);
  double dev_sq = 0.0;
  for (double v : est) {
    const double sq = (v - truth) * (v - truth);
    dev_sq += (sq - c.mse) * (sq - c.mse);
  }
  if (est.size() > 1) {
    c.bias_se = std::sqrt(c.variance * m / (m - 1.0) / m);
    c.mse_se = std::sqrt(dev_sq / (m - 1.0) / m);
  }
  if (ses != nullptr) {
    double width = 0.0, width2 = 0.0;
    std::size_t covered = 0, k = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
      const auto& se = (*ses)[i];
      if (!se) continue;
      ++k;
      const double w = 2.0 * z * *se;
      width += w;
      width2 += w * w;
      if (est[i] - z * *se < truth && truth < est[i] + z * *se) ++covered;
    }
    c.interval_count = k;
    if (k > 0) {
      const double kk = static_cast<double>(k);
      c.avg_width = width / kk;
      c.coverage = static_cast<double>(covered) / kk;
      const double var_w =
          k > 1 ? std::max(width2 / kk - (width / kk) * (width / kk), 0.0) *
                      kk / (kk - 1.0)
                : 0.0;
      c.width_se = std::sqrt(var_w / kk);
    }
  }
  return c;
}

}  // namespace detail

inline SimReport aggregate(const Scenario& sc,
                           const std::vector<ReplicateOutcome>& outcomes,
                           const SimOptions& opts) {
  const double z = opts.multiplier == CoverageMultiplier::literal_1_96
                       ? 1.96
                       : wald_z(sc.ci_level);
  std::vector<double> mp, mq, op, oq;
  std::vector<std::optional<double>> sp, sq;
  SimReport rep{sc, {}, {}, 0};
  for (const auto& o : outcomes) {
    if (o.mle_ok) {
      mp.push_back(o.mle_p);
      mq.push_back(o.mle_q);
      sp.push_back(o.se_p);
      sq.push_back(o.se_q);
      if (!o.se_p || !o.se_q) ++rep.mle_missing_se;
    } else {
      ++rep.mle.failures;
    }
    if (o.mop_ok) {
      op.push_back(o.mop_p);
      oq.push_back(o.mop_q);
    } else {
      ++rep.mop.failures;
    }
  }
  rep.mle.p = detail::summarize(mp, sc.truth.p(), &sp, z);
  rep.mle.q = detail::summarize(mq, sc.truth.q(), &sq, z);
  rep.mop.p = detail::summarize(op, sc.truth.p(), nullptr, z);
  rep.mop.q = detail::summarize(oq, sc.truth.q(), nullptr, z);
  return rep;
}

/// Replicate outcomes in replicate order; independent of the thread count.
inline std::vector<ReplicateOutcome> run_replicates(const Scenario& sc,
                                                    const SimOptions& opts) {
  std::vector<ReplicateOutcome> outcomes(sc.replicates);
  unsigned threads = opts.threads != 0 ? opts.threads
                                       : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(sc.replicates, 1)));
  auto work = [&](unsigned w) {
    for (std::size_t r = w; r < sc.replicates; r += threads) {
      outcomes[r] = run_replicate(sc, r, opts.fit);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return outcomes;
}

inline SimReport run_scenario(const Scenario& sc, const SimOptions& opts = {}) {
  if (sc.replicates < 1) throw domain_error("replicates must be >= 1");
  if (sc.n < 1) throw domain_error("sample size must be >= 1");
  return aggregate(sc, run_replicates(sc, opts), opts);
}

inline std::vector<SimReport> run_grid(const std::vector<Scenario>& grid,
                                       const SimOptions& opts = {}) {
  if (grid.empty()) throw domain_error("simulation grid is empty");
  std::vector<SimReport> out;
  out.reserve(grid.size());
  for (const auto& sc : grid) out.push_back(run_scenario(sc, opts));
  return out;
}

// ---------------------------------------------------------------------------
// Grid configuration

enum class Profile { desk, full };

inline std::size_t default_replicates(Profile p) {
  return p == Profile::desk ? 200 : 1000;
}

struct GridConfig {
  std::vector<double> p_values{0.25, 0.50, 0.75};
  std::vector<double> q_values{0.25, 0.50, 0.75};
  std::vector<std::size_t> n_values{25, 50, 75, 100};
  std::optional<std::size_t> replicates;
  std::uint64_t master_seed = 20170301;
  double ci_level = 0.95;
  CoverageMultiplier multiplier = CoverageMultiplier::literal_1_96;
  unsigned threads = 0;

  /// Parameter pairs outermost, sample sizes innermost; index = position.
  std::vector<Scenario> scenarios(Profile profile) const {
    const std::size_t reps = replicates.value_or(default_replicates(profile));
    std::vector<Scenario> out;
    std::uint64_t idx = 0;
    for (double p : p_values) {
      for (double q : q_values) {
        for (std::size_t n : n_values) {
          out.push_back(Scenario{DSLParams(p, q), n, reps, master_seed,
                                 ci_level, idx++});
        }
      }
    }
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& v, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace detail

/**
 * key=value grid description; '#' starts a comment. Keys: p, q, n
 * (comma-separated lists), replicates, master_seed, ci_level,
 * multiplier (literal|exact), threads. Unknown keys are errors.
 */
inline GridConfig parse_grid_config(std::istream& in) {
  GridConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": " + why);
    };
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    try {
      auto to_d = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto to_u = [](const std::string& s) {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
      };
      if (key == "p") {
        cfg.p_values = detail::parse_list<double>(val, to_d);
      } else if (key == "q") {
        cfg.q_values = detail::parse_list<double>(val, to_d);
      } else if (key == "n") {
        cfg.n_values = detail::parse_list<std::size_t>(
            val, [&](const std::string& s) { return static_cast<std::size_t>(to_u(s)); });
      } else if (key == "replicates") {
        cfg.replicates = static_cast<std::size_t>(to_u(val));
      } else if (key == "master_seed") {
        cfg.master_seed = to_u(val);
      } else if (key == "ci_level") {
        cfg.ci_level = to_d(val);
      } else if (key == "multiplier") {
        if (val == "literal") {
          cfg.multiplier = CoverageMultiplier::literal_1_96;
        } else if (val == "exact") {
          cfg.multiplier = CoverageMultiplier::exact_z;
        } else {
          fail("multiplier must be 'literal' or 'exact'");
        }
      } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(to_u(val));
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("config line", 0) == 0) throw;
      fail("bad value for '" + key + "': " + val);
    } catch (const std::out_of_range&) {
      fail("value out of range for '" + key + "'");
    }
  }
  for (double p : cfg.p_values) detail::require_open_unit("p", p);
  for (double q : cfg.q_values) detail::require_open_unit("q", q);
  for (auto n : cfg.n_values) {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  }
  if (cfg.replicates && *cfg.replicates < 1) {
    throw std::invalid_argument("config: replicates must be >= 1");
  }
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw std::invalid_argument("config: ci_level must lie in (0, 1)");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kSimCsvHeader =
    "p,q,n,replicates,bias(p),bias(q),mse(p),mse(q),aw(p),aw(q),CL(p),CL(q),"
    "MP bias(p),MP bias(q),MP mse(p),MP mse(q),"
    "ML failures,ML missing SE,MP failures";

namespace detail {

inline std::string fmt_fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_fixed(*v) : std::string{};
}

inline std::string fmt_cell(const CellSummary& c, double CellSummary::*field) {
  return c.count > 0 ? fmt_fixed(c.*field) : std::string{};
}

}  // namespace detail

/// One row in the column order of kSimCsvHeader; absent cells stay empty.
inline std::string csv_row(const SimReport& r) {
  using detail::fmt_cell;
  using detail::fmt_opt;
  std::ostringstream os;
  const auto& t = r.scenario.truth;
  os << detail::fmt_fixed(t.p(), 2) << ',' << detail::fmt_fixed(t.q(), 2) << ','
     << r.scenario.n << ',' << r.scenario.replicates << ','
     << fmt_cell(r.mle.p, &CellSummary::bias) << ','
     << fmt_cell(r.mle.q, &CellSummary::bias) << ','
     << fmt_cell(r.mle.p, &CellSummary::mse) << ','
     << fmt_cell(r.mle.q, &CellSummary::mse) << ',' << fmt_opt(r.mle.p.avg_width)
     << ',' << fmt_opt(r.mle.q.avg_width) << ',' << fmt_opt(r.mle.p.coverage)
     << ',' << fmt_opt(r.mle.q.coverage) << ','
     << fmt_cell(r.mop.p, &CellSummary::bias) << ','
     << fmt_cell(r.mop.q, &CellSummary::bias) << ','
     << fmt_cell(r.mop.p, &CellSummary::mse) << ','
     << fmt_cell(r.mop.q, &CellSummary::mse) << ',' << r.mle.failures << ','
     << r.mle_missing_se << ',' << r.mop.failures;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<SimReport>& reports) {
  os << kSimCsvHeader << '\n';
  for (const auto& r : reports) os << csv_row(r) << '\n';
}

}  // namespace dslogistic
