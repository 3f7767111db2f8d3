#include "gnm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "gnm/error.hpp"

namespace gnm {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Probability-ordered sequential search; expected cost O(n*p).
std::uint64_t binomial_inversion(std::uint64_t n, double p, Rng& rng) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  const double first = std::exp(static_cast<double>(n) * std::log1p(-p));
  for (;;) {
    double u = rng.uniform();
    double pmf = first;
    std::uint64_t x = 0;
    bool fell_off = false;
    while (u > pmf) {
      u -= pmf;
      ++x;
      if (x > n) {
        fell_off = true;
        break;
      }
      pmf *= ratio * (static_cast<double>(n - x + 1) / static_cast<double>(x));
      // The tail below the smallest double carries no representable mass;
      // landing there is a rounding artefact, so redraw.
      if (pmf <= 0.0) {
        fell_off = true;
        break;
      }
    }
    if (!fell_off) return x;
  }
}

// BTRS (Hormann 1993), p <= 0.5 and n*p >= 10.
std::uint64_t binomial_btrs(std::uint64_t n_count, double p, Rng& rng) {
  const double n = static_cast<double>(n_count);
  const double spq = std::sqrt(n * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / (1.0 - p));
  const double m = std::floor((n + 1.0) * p);
  const double h = std::lgamma(m + 1.0) + std::lgamma(n - m + 1.0);

  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double log_ratio = h - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + (k - m) * lpq;
    if (v <= log_ratio) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 1));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kBadArgs, "Rng::below needs a positive bound");
  // Reject the low (2^64 mod bound) values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t binomial_draw(std::uint64_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kBadArgs, "binomial probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const bool flip = p > 0.5;
  const double q = flip ? 1.0 - p : p;
  const std::uint64_t draw =
      static_cast<double>(n) * q < 10.0 ? binomial_inversion(n, q, rng) : binomial_btrs(n, q, rng);
  return flip ? n - draw : draw;
}

std::vector<std::uint64_t> choose_without_replacement(std::uint64_t t, std::uint64_t x, Rng& rng) {
  if (x > t) {
    throw Error(ErrorCode::kBadArgs,
                "cannot choose " + std::to_string(x) + " of " + std::to_string(t) + " items");
  }
  const bool complement = x > t - x;
  const std::uint64_t picks = complement ? t - x : x;

  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(picks));
  for (std::uint64_t j = t - picks; j < t; ++j) {
    const std::uint64_t r = rng.below(j + 1);
    if (!chosen.insert(r).second) chosen.insert(j);
  }

  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(x));
  if (!complement) {
    out.assign(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  for (std::uint64_t i = 0; i < t; ++i) {
    if (!chosen.contains(i)) out.push_back(i);
  }
  return out;
}

}  // namespace gnm
