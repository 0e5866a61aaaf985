// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tg {

// Seedable generator with portable output. The engine is std::mt19937_64,
// whose sequence is fixed by the standard; the distributions are implemented
// here instead of using <random>'s, whose outputs differ across standard
// libraries. Synthetic corpora and all sampled estimates are therefore
// reproducible across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

  double normal();

  // log of a Gamma(shape, 1) variate. Works for tiny shapes where the variate
  // itself would underflow.
  double log_gamma_variate(double shape);

  // Dirichlet draw, normalized in log space so that concentrations far below
  // one still produce a proper distribution.
  std::vector<double> dirichlet(std::span<const double> alpha);

  // Index drawn proportionally to non-negative weights summing to `total`.
  std::size_t categorical(std::span<const double> weights, double total);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer over (seed, stream); used to derive independent
// per-document and per-chain seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tg
