#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "chi_square.hpp"
#include "dslogistic/sampling.hpp"

using namespace dslogistic;
using Catch::Matchers::WithinAbs;

TEST_CASE("splitmix64 reference outputs", "[sampling][rng]") {
  // Reference: the first three outputs of the SplitMix64 generator seeded with 0
  // are splitmix64(k * golden) for k = 0, 1, 2.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64(0x3c6ef372fe94f82aULL) == 0x06c45d188009454fULL);
}

TEST_CASE("stream contract", "[sampling][rng]") {
  SECTION("mt19937_64 default-seed 10000th output") {
    SeededStream s(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = s();
    CHECK(x == 9981545732273789042ULL);
  }
  SECTION("uniform lies strictly inside (0, 1)") {
    SeededStream s(3);
    for (int i = 0; i < 100000; ++i) {
      const double u = s.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
    CHECK((0.0 + 0.5) * 0x1.0p-52 > 0.0);
    CHECK((static_cast<double>((~0ULL) >> 12) + 0.5) * 0x1.0p-52 < 1.0);
  }
  SECTION("split streams are distinct and reproducible") {
    auto a = SeededStream::split(7, 1, 2);
    auto b = SeededStream::split(7, 1, 2);
    auto c = SeededStream::split(7, 2, 1);
    CHECK(a.seed() == b.seed());
    CHECK(a.seed() != c.seed());
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("determinism", "[sampling]") {
  const DSLParams d(0.4, 0.7, 2);
  for (auto route : {SamplingRoute::inversion, SamplingRoute::floor_continuous}) {
    SeededStream s1(42), s2(42), s3(43);
    const auto a = sample(d, s1, 500, route);
    const auto b = sample(d, s2, 500, route);
    const auto c = sample(d, s3, 500, route);
    CHECK(a == b);
    CHECK_FALSE(a == c);
  }
  SeededStream s(1);
  CHECK(sample(d, s, 0).size() == 0);
}

TEST_CASE("inversion goodness of fit", "[sampling][gof]") {
  const std::vector<DSLParams> cases = {DSLParams(0.5, 0.5), DSLParams(0.25, 0.75, 3),
                                        DSLParams(0.9, 0.2), DSLParams(0.1, 0.6, -4)};
  std::uint64_t seed = 100;
  for (const auto& d : cases) {
    SeededStream s(seed++);
    const auto x = sample_inversion(d, s, 100000);
    const double pv = testutil::gof_pvalue(x, d);
    INFO("p=" << d.p() << " q=" << d.q() << " pvalue=" << pv);
    CHECK(pv > 0.001);
  }
}

TEST_CASE("floor route goodness of fit", "[sampling][gof]") {
  const DSLParams d(0.3, 0.8, 1);
  SeededStream s(9);
  const auto x = sample_floor_continuous(d, s, 100000);
  CHECK(testutil::gof_pvalue(x, d) > 0.001);
}

TEST_CASE("routes agree in distribution", "[sampling][gof]") {
  int failures = 0;
  const DSLParams d(0.6, 0.35, -1);
  for (std::uint64_t r = 0; r < 20; ++r) {
    SeededStream a(1000 + r), b(5000 + r);
    const auto x = sample_inversion(d, a, 20000);
    const auto y = sample_floor_continuous(d, b, 20000);
    if (testutil::two_sample_pvalue(x, y) < 0.001) ++failures;
  }
  CHECK(failures <= 1);
}

TEST_CASE("branch proportions", "[sampling]") {
  SECTION("p = q = 0.5 puts half the mass at x >= 0") {
    SeededStream s(11);
    const auto x = sample(DSLParams(0.5, 0.5), s, 200000);
    const double frac = static_cast<double>(x.s_plus()) / 200000.0;
    CHECK_THAT(frac, WithinAbs(0.5, 5 * std::sqrt(0.25 / 200000.0)));
  }
  SECTION("p = 0.5, q = 0.25 puts a third below zero") {
    SeededStream s(12);
    const auto x = sample(DSLParams(0.5, 0.25), s, 200000);
    const double frac = static_cast<double>(x.s_minus()) / 200000.0;
    CHECK_THAT(frac, WithinAbs(1.0 / 3.0, 5 * std::sqrt(2.0 / 9.0 / 200000.0)));
  }
}

TEST_CASE("sample moments match the exact series", "[sampling][moments]") {
  const DSLParams d(0.515, 0.719);
  SeededStream s(2024);
  const std::size_t n = 1000000;
  const auto x = sample(d, s, n);
  const auto m = mean_variance_exact(d);
  const double mean_se = std::sqrt(m.variance / static_cast<double>(n));
  CHECK(std::abs(x.mean() - m.mean) < 5 * mean_se);

  // SE of the sample variance needs the fourth central moment.
  long double m4 = 0.0L;
  const auto [lo, hi] = support_bound(d, 1e-18);
  for (integer k = lo; k <= hi; ++k) {
    const long double e = static_cast<long double>(k) - m.mean;
    m4 += e * e * e * e * pmf(d, k);
  }
  const double var_se = std::sqrt((static_cast<double>(m4) - m.variance * m.variance) /
                                  static_cast<double>(n));
  CHECK(std::abs(x.variance() - m.variance) < 5 * var_se);
}
