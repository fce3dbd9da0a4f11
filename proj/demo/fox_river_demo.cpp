// Fits the discrete skew logistic law to the Fox River flood-stage data and
// prints a few fitted probabilities next to the observed frequencies.

#include <cstdio>
#include <map>

#include "dslogistic/dslogistic.hpp"

int main() {
  using namespace dslogistic;

  const IntSample s = fox_river().transformed({kFoxRiverShift});
  const FitResult fit = fit_mle(s);
  const DSLParams d(fit.value("p"), fit.value("q"));

  std::printf("p = %.4f (%.4f), q = %.4f (%.4f), logL = %.4f\n", d.p(),
              *fit.at("p").se, d.q(), *fit.at("q").se, fit.loglik);
  std::printf("mode = %lld, median = %lld, mean = %.4f\n",
              static_cast<long long>(mode(d).front()),
              static_cast<long long>(median(d)),
              mean_variance_exact(d).mean);

  std::map<integer, int> counts;
  for (integer v : s.values()) ++counts[v];
  std::printf("%5s %9s %9s\n", "x", "observed", "expected");
  for (integer x = s.min(); x <= s.max(); ++x) {
    std::printf("%5lld %9d %9.3f\n", static_cast<long long>(x), counts[x],
                static_cast<double>(s.size()) * pmf(d, x));
  }
}
