#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gnm {

// Stream derivation: the seed of child stream `stream` of a generator seeded
// with `seed` is splitmix64(splitmix64(seed) ^ splitmix64(stream + 1)).
// Samplers give every hierarchy level its own child stream (stream = lambda),
// and replicate runs use child streams of a master seed (stream = replicate
// index), so results never depend on scheduling.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] Rng child(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // True with probability p; p <= 0 never, p >= 1 always.
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform on [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Exact Binomial(n, p) variate. Sequential-search inversion when
// n*min(p,1-p) < 10, otherwise Hormann's BTRS transformed rejection with an
// exact log-pmf acceptance test. No normal approximation is used.
[[nodiscard]] std::uint64_t binomial_draw(std::uint64_t n, double p, Rng& rng);

// x distinct indices drawn uniformly from [0, t), returned sorted. Uses
// Floyd's algorithm on min(x, t - x) so memory stays O(x) for any t.
// Throws BadArgs when x > t.
[[nodiscard]] std::vector<std::uint64_t> choose_without_replacement(std::uint64_t t, std::uint64_t x,
                                                                    Rng& rng);

}  // namespace gnm
