// dslogistic: command-line front end.
//
//   dslogistic eval     --p P --q Q [--mu M] [--from A --to B | --gamma G...]
//   dslogistic sample   --p P --q Q [--mu M] --n N [--seed S] [--route R]
//   dslogistic fit      (--input FILE | --builtin fox-river) [--model M] ...
//   dslogistic simulate [--config FILE] [--profile desk|full] [--out FILE]
//
// Exit status: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dslogistic/dslogistic.hpp"

namespace {

using namespace dslogistic;

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

/// Thrown for bad flag combinations discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalArgs {
  double p = 0.5, q = 0.5;
  integer mu = 0;
  integer from = -5, to = 5;
  std::vector<double> gammas;
};

int run_eval(const EvalArgs& a) {
  const DSLParams d(a.p, a.q, a.mu);
  if (!a.gammas.empty()) {
    std::cout << "gamma,quantile\n";
    for (double g : a.gammas) {
      std::cout << format_probability(g) << ',' << quantile(d, g) << '\n';
    }
    return 0;
  }
  if (a.from > a.to) throw UsageError("--from must not exceed --to");
  std::cout << "x,pmf,cdf,sf,hazard\n";
  for (integer x = a.from; x <= a.to; ++x) {
    std::cout << x << ',' << format_probability(pmf(d, x)) << ','
              << format_probability(cdf(d, x)) << ','
              << format_probability(sf(d, x)) << ','
              << format_probability(hazard(d, x)) << '\n';
  }
  return 0;
}

struct SampleArgs {
  double p = 0.5, q = 0.5;
  integer mu = 0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string route = "inversion";
  std::string out;
  std::string format = "lines";
};

int run_sample(const SampleArgs& a) {
  const DSLParams d(a.p, a.q, a.mu);
  SeededStream stream(a.seed);
  const auto s = sample(d, stream, a.n,
                        a.route == "floor" ? SamplingRoute::floor_continuous
                                           : SamplingRoute::inversion);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot open " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  if (a.format == "csv") os << "index,value\n";
  std::size_t i = 0;
  for (integer v : s.values()) {
    if (a.format == "csv") os << i++ << ',';
    os << v << '\n';
  }
  return 0;
}

struct FitArgs {
  std::string input;
  std::string builtin;
  std::string model = "dslog";
  std::string method = "mle";
  double shift = 0.0;
  std::string order = "subtract-floor";
  std::string pipeline = "table4";
  std::string info = "observed";
  std::string format = "record";
  double ci_level = 0.95;
  bool profile_mu = false;
};

Dataset load_dataset(const FitArgs& a) {
  if (!a.builtin.empty() && !a.input.empty()) {
    throw UsageError("give either --input or --builtin, not both");
  }
  if (!a.builtin.empty()) return fox_river();
  if (a.input.empty()) throw UsageError("one of --input or --builtin is required");
  std::ifstream in(a.input);
  if (!in) throw std::runtime_error("cannot open " + a.input);
  return {a.input, read_reals(in)};
}

int run_fit(const FitArgs& a) {
  const Dataset data = load_dataset(a);
  const Transform t{a.shift, a.order == "floor-subtract"
                                 ? TransformOrder::floor_then_subtract
                                 : TransformOrder::subtract_then_floor};
  FitOptions opts;
  opts.ci_level = a.ci_level;
  opts.info = a.info == "expected" ? InfoKind::expected : InfoKind::observed;

  if (a.model == "all") {
    if (a.method != "mle") throw UsageError("--model all requires --method mle");
    const auto cols = compare_models(
        data, t,
        a.pipeline == "shifted" ? CompetitorPipeline::shifted
                                : CompetitorPipeline::table4,
        opts);
    std::cout << "# data=" << data.name << " n=" << data.raw.size()
              << " transform=" << t.describe() << " pipeline=" << a.pipeline
              << '\n';
    write_comparison(std::cout, cols);
    return 0;
  }

  const auto model = parse_model(a.model);
  const IntSample s = data.transformed(t);
  FitResult r;
  if (a.method == "mop") {
    if (model != Model::dslog) throw UsageError("--method mop applies to dslog only");
    try {
      r = fit_mop(s);
    } catch (const MopInapplicable& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kRuntimeFailure;
    }
  } else if (a.profile_mu) {
    if (model != Model::dslog) throw UsageError("--profile-mu applies to dslog only");
    r = fit_mu_profile(s, opts);
  } else {
    r = fit_competitor(*model, s, opts);
  }

  if (a.format == "csv") {
    std::cout << kFitCsvHeader << '\n';
    write_csv_rows(std::cout, r);
  } else {
    write_record(std::cout, r,
                 {{"data", data.name}, {"transform", t.describe()}});
  }
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string profile = "desk";
  std::string out;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

int run_simulate(const SimulateArgs& a) {
  GridConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw std::runtime_error("cannot open " + a.config);
    try {
      cfg = parse_grid_config(in);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (a.replicates) {
    if (*a.replicates < 1) throw UsageError("--replicates must be >= 1");
    cfg.replicates = a.replicates;
  }
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;

  SimOptions opts;
  opts.multiplier = cfg.multiplier;
  opts.threads = cfg.threads;
  const auto grid =
      cfg.scenarios(a.profile == "full" ? Profile::full : Profile::desk);
  const auto start = std::chrono::steady_clock::now();
  const auto reports = run_grid(grid, opts);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

  if (a.out.empty()) {
    write_csv(std::cout, reports);
  } else {
    std::ofstream file(a.out);
    if (!file) throw std::runtime_error("cannot open " + a.out);
    write_csv(file, reports);
  }
  std::cerr << "simulated " << grid.size() << " scenarios x "
            << grid.front().replicates << " replicates in " << secs << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete skew logistic distribution: evaluate, sample, fit, simulate"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Tabulate pmf, cdf, sf and hazard, or quantiles");
  e->add_option("--p", eval.p, "Right-tail parameter, 0 < p < 1")->required();
  e->add_option("--q", eval.q, "Left-tail parameter, 0 < q < 1")->required();
  e->add_option("--mu", eval.mu, "Integer location");
  e->add_option("--from", eval.from, "First x (default -5)");
  e->add_option("--to", eval.to, "Last x (default 5)");
  e->add_option("--gamma", eval.gammas, "Quantile orders in (0,1); switches to a quantile table");

  SampleArgs smp;
  auto* s = app.add_subcommand("sample", "Draw seeded random variates");
  s->add_option("--p", smp.p)->required();
  s->add_option("--q", smp.q)->required();
  s->add_option("--mu", smp.mu);
  s->add_option("--n", smp.n, "Number of draws")->required();
  s->add_option("--seed", smp.seed, "64-bit seed (default 1)");
  s->add_option("--route", smp.route, "inversion or floor")
      ->check(CLI::IsMember({"inversion", "floor"}));
  s->add_option("--out", smp.out, "Write to file instead of stdout");
  s->add_option("--format", smp.format, "lines or csv")
      ->check(CLI::IsMember({"lines", "csv"}));

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit models to integer-transformed data");
  f->add_option("--input", fit.input, "File with one real per line ('#' comments)");
  f->add_option("--builtin", fit.builtin, "Embedded dataset")
      ->check(CLI::IsMember({"fox-river"}));
  f->add_option("--model", fit.model, "dslog, dlog, dlaplace, dnorm or all")
      ->check(CLI::IsMember({"dslog", "dlog", "dlaplace", "dnorm", "all"}));
  f->add_option("--method", fit.method, "mle or mop")
      ->check(CLI::IsMember({"mle", "mop"}));
  f->add_option("--shift", fit.shift, "Constant subtracted before flooring");
  f->add_option("--order", fit.order, "subtract-floor (default) or floor-subtract")
      ->check(CLI::IsMember({"subtract-floor", "floor-subtract"}));
  f->add_option("--pipeline", fit.pipeline,
                "Data fed to DLog/DNorm with --model all: table4 (unshifted floor) or shifted")
      ->check(CLI::IsMember({"table4", "shifted"}));
  f->add_option("--info", fit.info, "observed or expected information for SEs")
      ->check(CLI::IsMember({"observed", "expected"}));
  f->add_option("--ci-level", fit.ci_level, "Wald interval level (default 0.95)");
  f->add_flag("--profile-mu", fit.profile_mu, "Estimate integer mu by profile likelihood");
  f->add_option("--format", fit.format, "record or csv")
      ->check(CLI::IsMember({"record", "csv"}));

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Monte Carlo study of MLE and MOP");
  m->add_option("--config", sim.config, "key=value grid file");
  m->add_option("--profile", sim.profile, "desk (200 replicates) or full (1000)")
      ->check(CLI::IsMember({"desk", "full"}));
  m->add_option("--out", sim.out, "CSV output file (default stdout)");
  m->add_option("--replicates", sim.replicates, "Override the replicate count");
  m->add_option("--seed", sim.seed, "Override the master seed");
  m->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*e) return run_eval(eval);
    if (*s) return run_sample(smp);
    if (*f) return run_fit(fit);
    if (*m) return run_simulate(sim);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsageError;
  } catch (const dslogistic::domain_error& err) {
    std::cerr << "invalid argument: " << err.what() << '\n';
    return kUsageError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}
