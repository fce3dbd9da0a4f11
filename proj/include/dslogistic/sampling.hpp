/**
 * @file sampling.hpp
 * @brief Seeded random variates for DSLogistic(p, q, mu).
 *
 * Two independent routes are provided: discrete inversion (quantile of a
 * uniform) and flooring a continuous skew logistic draw. They agree in
 * distribution and are used to cross-check each other.
 *
 * Generator contract (bit-exact across platforms):
 *   engine   std::mt19937_64 seeded with the 64-bit seed
 *   uniform  u = ((x >> 12) + 0.5) * 2^-52, which lies strictly in (0, 1)
 *   split    seed(master, a, b) = m(m(m(master) ^ a) ^ b), m = splitmix64
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "dslogistic/core.hpp"
#include "dslogistic/sample.hpp"

namespace dslogistic {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class SeededStream {
 public:
  static constexpr std::string_view algorithm =
      "mt19937_64, u = ((x >> 12) + 0.5) * 2^-52";

  explicit SeededStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Stream for replicate `replicate` of scenario `scenario`.
  static SeededStream split(std::uint64_t master, std::uint64_t scenario,
                            std::uint64_t replicate) {
    return SeededStream(
        splitmix64(splitmix64(splitmix64(master) ^ scenario) ^ replicate));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  // UniformRandomBitGenerator, for use with <random> in tests.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

enum class SamplingRoute { inversion, floor_continuous };

inline IntSample sample_inversion(const DSLParams& d, SeededStream& stream,
                                  std::size_t n) {
  std::vector<integer> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(d, stream.uniform()));
  return IntSample(std::move(out));
}

inline IntSample sample_floor_continuous(const ContinuousSLParams& c,
                                         SeededStream& stream, std::size_t n,
                                         integer mu = 0) {
  std::vector<integer> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = continuous_quantile(c, stream.uniform());
    out.push_back(static_cast<integer>(std::floor(x)) + mu);
  }
  return IntSample(std::move(out));
}

inline IntSample sample_floor_continuous(const DSLParams& d,
                                         SeededStream& stream, std::size_t n) {
  return sample_floor_continuous(params_to_continuous(d), stream, n, d.mu());
}

inline IntSample sample(const DSLParams& d, SeededStream& stream, std::size_t n,
                        SamplingRoute route = SamplingRoute::inversion) {
  return route == SamplingRoute::inversion
             ? sample_inversion(d, stream, n)
             : sample_floor_continuous(d, stream, n);
}

}  // namespace dslogistic
