#include "gnm/kron.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gnm/error.hpp"
#include "wide_int.hpp"

namespace gnm {

namespace {

using detail::u128;
constexpr u128 kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t narrow_or_throw(u128 value, const char* what) {
  if (value > kU64Max) {
    throw Error(ErrorCode::kOverflow, std::string(what) + " exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

void check_theta(const ThetaMatrix& theta) {
  ModelConfig probe;
  probe.theta = theta;
  probe.big_k = probe.ell = 1;
  validate_config(probe);
}

}  // namespace

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
  u128 result = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    result *= base;
    if (result > kU64Max) {
      throw Error(ErrorCode::kOverflow, std::to_string(base) + "^" + std::to_string(exp) +
                                            " exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

double DenseProbMatrix::sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

DenseProbMatrix kronecker_power(const ThetaMatrix& theta, std::uint32_t k, std::uint64_t cap) {
  check_theta(theta);
  if (k < 1) {
    throw Error(ErrorCode::kBadArgs, "kronecker_power needs k >= 1");
  }
  const std::uint64_t b = theta.side;
  const std::uint64_t side = checked_pow(b, k);
  if (static_cast<u128>(side) * side > cap) {
    throw Error(ErrorCode::kCapExceeded, "P^" + std::to_string(k) + " has " + std::to_string(side) +
                                             "^2 cells, above the dense cap of " +
                                             std::to_string(cap));
  }

  DenseProbMatrix current{b, theta.entries};
  for (std::uint32_t level = 1; level < k; ++level) {
    const std::uint64_t next_side = current.side * b;
    DenseProbMatrix next{next_side, std::vector<double>(next_side * next_side)};
    for (std::uint64_t i = 0; i < current.side; ++i) {
      for (std::uint64_t j = 0; j < current.side; ++j) {
        const double outer = current.at(i, j);
        for (std::uint64_t x = 0; x < b; ++x) {
          for (std::uint64_t y = 0; y < b; ++y) {
            next.probs[(i * b + x) * next_side + (j * b + y)] =
                outer * theta.at(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
          }
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

double cell_prob(const ThetaMatrix& theta, std::uint32_t digits, std::uint64_t row,
                 std::uint64_t col) {
  const std::uint32_t b = theta.side;
  std::array<std::uint32_t, 64> row_digits{};
  std::array<std::uint32_t, 64> col_digits{};
  for (std::uint32_t d = 0; d < digits; ++d) {
    row_digits[d] = static_cast<std::uint32_t>(row % b);
    col_digits[d] = static_cast<std::uint32_t>(col % b);
    row /= b;
    col /= b;
  }
  // Multiply outermost factor first so the result is bit-identical to the
  // iterated Kronecker product.
  double p = 1.0;
  for (std::uint32_t d = digits; d-- > 0;) {
    p *= theta.at(row_digits[d], col_digits[d]);
  }
  return p;
}

double edge_prob(const ModelConfig& cfg, std::uint64_t row, std::uint64_t col) {
  validate_config(cfg);
  const std::uint64_t n = cfg.node_count();
  if (row >= n || col >= n) {
    throw Error(ErrorCode::kIndexOutOfRange, "cell (" + std::to_string(row) + ", " +
                                                 std::to_string(col) + ") outside " +
                                                 std::to_string(n) + " nodes");
  }
  return cell_prob(cfg.theta, cfg.big_k, row, col);
}

std::uint64_t ci_rv_count(const ModelConfig& cfg) {
  validate_config(cfg);
  const u128 b2 = static_cast<u128>(cfg.b()) * cfg.b();
  u128 term = 1;
  for (std::uint32_t i = 0; i < cfg.ell; ++i) {
    term *= b2;
    if (term > kU64Max) throw Error(ErrorCode::kOverflow, "CI random-variable count exceeds 64 bits");
  }
  u128 total = 0;
  for (std::uint32_t lambda = 0; lambda <= cfg.tied_levels(); ++lambda) {
    total += term;
    if (total > kU64Max) throw Error(ErrorCode::kOverflow, "CI random-variable count exceeds 64 bits");
    if (lambda < cfg.tied_levels()) term *= b2;
  }
  return static_cast<std::uint64_t>(total);
}

double expected_active(const ModelConfig& cfg, std::uint32_t lambda) {
  validate_config(cfg);
  if (lambda > cfg.tied_levels()) {
    throw Error(ErrorCode::kBadArgs, "level " + std::to_string(lambda) + " beyond K-ell=" +
                                         std::to_string(cfg.tied_levels()));
  }
  return std::pow(cfg.theta.sum(), static_cast<double>(cfg.ell + lambda));
}

std::uint64_t dcsd_ebound(const ModelConfig& cfg) {
  validate_config(cfg);
  u128 power = 1;
  for (std::uint32_t i = 0; i < cfg.big_k + 2; ++i) {
    power *= cfg.b();
    if (power > kU64Max) throw Error(ErrorCode::kOverflow, "ebound exceeds 64 bits");
  }
  return narrow_or_throw(power * (cfg.tied_levels() + 1), "ebound");
}

double dcsd_expected_examined(const ModelConfig& cfg) {
  validate_config(cfg);
  const double b2 = static_cast<double>(cfg.b()) * cfg.b();
  double total = std::pow(b2, cfg.ell);
  for (std::uint32_t lambda = 0; lambda < cfg.tied_levels(); ++lambda) {
    total += b2 * expected_active(cfg, lambda);
  }
  return total;
}

}  // namespace gnm
