#pragma once

#include <cstdint>
#include <vector>

#include "gnm/config.hpp"

namespace gnm {

// Dense materialisation limit, in matrix cells / random variables.
inline constexpr std::uint64_t kDefaultDenseCap = std::uint64_t{1} << 26;

struct DenseProbMatrix {
  std::uint64_t side = 0;
  std::vector<double> probs;  // row-major, side * side

  [[nodiscard]] double at(std::uint64_t row, std::uint64_t col) const {
    return probs[row * side + col];
  }
  [[nodiscard]] double sum() const;
};

// Index convention used throughout: the most significant base-b digit of a
// row/column index selects the entry of the first (outermost) Kronecker
// factor, the least significant digit the last one. Appending a factor on the
// right therefore maps cell (i, j) to children (i*b + x, j*b + y).

// P^k = Theta (x) ... (x) Theta (k factors). Throws CapExceeded when
// (b^k)^2 > cap.
[[nodiscard]] DenseProbMatrix kronecker_power(const ThetaMatrix& theta, std::uint32_t k,
                                              std::uint64_t cap = kDefaultDenseCap);

// Product of theta over the `digits` base-b digit pairs of (row, col), most
// significant first. Both indices must be < b^digits.
[[nodiscard]] double cell_prob(const ThetaMatrix& theta, std::uint32_t digits, std::uint64_t row,
                               std::uint64_t col);

// Single entry of P^K without materialising it. The product of K factors
// carries a worst-case relative rounding error of about K * 2^-53.
[[nodiscard]] double edge_prob(const ModelConfig& cfg, std::uint64_t row, std::uint64_t col);

// Number of random variables in the full mKPGM hierarchy:
// sum_{lambda=0}^{K-ell} (b^(ell+lambda))^2. Throws Overflow past 2^64-1.
[[nodiscard]] std::uint64_t ci_rv_count(const ModelConfig& cfg);

// Expected number of active cells at tying level lambda, (sum Theta)^(ell+lambda).
[[nodiscard]] double expected_active(const ModelConfig& cfg, std::uint32_t lambda);

// (K - ell + 1) * b^(K+2). Throws Overflow past 2^64-1.
[[nodiscard]] std::uint64_t dcsd_ebound(const ModelConfig& cfg);

// Expected RVs examined by the pruned sampler:
// (b^ell)^2 + b^2 * sum_{lambda=0}^{K-ell-1} (sum Theta)^(ell+lambda).
[[nodiscard]] double dcsd_expected_examined(const ModelConfig& cfg);

// base^exp, throwing Overflow instead of wrapping.
[[nodiscard]] std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp);

}  // namespace gnm
