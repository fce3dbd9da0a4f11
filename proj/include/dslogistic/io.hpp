#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dslogistic/estimation.hpp"

namespace dslogistic {

/// "%.4f" (estimates, standard errors, log-likelihoods).
inline std::string format_estimate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

/// "%.6g" (probabilities).
inline std::string format_probability(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

/**
 * Flat key=value record, one pair per line:
 *
 *   model, method, n, <meta...>, then per parameter <name>, <name>.se,
 *   <name>.ci_lower, <name>.ci_upper (absent values are skipped), then
 *   loglik, converged, boundary, iterations and note (when non-empty).
 */
inline void write_record(std::ostream& os, const FitResult& r,
                         const Metadata& meta = {}) {
  os << "model=" << r.model << '\n'
     << "method=" << to_string(r.method) << '\n'
     << "n=" << r.n << '\n';
  for (const auto& [k, v] : meta) os << k << '=' << v << '\n';
  for (const auto& e : r.estimates) {
    os << e.name << '=' << format_estimate(e.value) << '\n';
    if (e.se) os << e.name << ".se=" << format_estimate(*e.se) << '\n';
    if (e.ci) {
      os << e.name << ".ci_lower=" << format_estimate(e.ci->first) << '\n'
         << e.name << ".ci_upper=" << format_estimate(e.ci->second) << '\n';
    }
  }
  os << "loglik=" << format_estimate(r.loglik) << '\n'
     << "converged=" << (r.converged ? "true" : "false") << '\n'
     << "boundary=" << (r.boundary ? "true" : "false") << '\n'
     << "iterations=" << r.iterations << '\n';
  if (!r.note.empty()) os << "note=" << r.note << '\n';
}

inline constexpr const char* kFitCsvHeader =
    "model,method,n,parameter,estimate,se,ci_lower,ci_upper,loglik,converged";

inline void write_csv_rows(std::ostream& os, const FitResult& r) {
  for (const auto& e : r.estimates) {
    os << r.model << ',' << to_string(r.method) << ',' << r.n << ',' << e.name
       << ',' << format_estimate(e.value) << ','
       << (e.se ? format_estimate(*e.se) : "") << ','
       << (e.ci ? format_estimate(e.ci->first) : "") << ','
       << (e.ci ? format_estimate(e.ci->second) : "") << ','
       << format_estimate(r.loglik) << ',' << (r.converged ? "true" : "false")
       << '\n';
  }
}

/// One column of the model-comparison table.
struct ComparisonColumn {
  std::string heading;
  FitResult fit;
  /// Location fixed by preprocessing rather than estimated (shown bare).
  std::optional<double> fixed_mu;
};

/**
 * CSV with one column per model and rows mu, p, q, sigma, LogL. Cells read
 * "estimate(se)"; parameters a model does not have are left empty.
 */
inline void write_comparison(std::ostream& os,
                             const std::vector<ComparisonColumn>& cols) {
  os << "parameter";
  for (const auto& c : cols) os << ',' << c.heading;
  os << '\n';
  for (const char* name : {"mu", "p", "q", "sigma"}) {
    os << name;
    for (const auto& c : cols) {
      os << ',';
      if (const auto* e = c.fit.find(name)) {
        os << format_estimate(e->value);
        if (e->se) os << '(' << format_estimate(*e->se) << ')';
      } else if (std::string(name) == "mu" && c.fixed_mu) {
        std::ostringstream v;
        v << *c.fixed_mu;
        os << v.str();
      }
    }
    os << '\n';
  }
  os << "LogL";
  for (const auto& c : cols) os << ',' << format_estimate(c.fit.loglik);
  os << '\n';
}

}  // namespace dslogistic
