#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gnm/config.hpp"
#include "gnm/groups.hpp"
#include "gnm/kron.hpp"
#include "gnm/network.hpp"

namespace gnm {

struct SampleOptions {
  std::uint64_t dense_cap = kDefaultDenseCap;
  std::uint64_t group_cap = kDefaultGroupCap;
  // Test hook for the mKPGM samplers: replaces the sampled level-0
  // realisation with these cells (side b^ell). Level 0 is still counted as
  // fully examined.
  std::optional<std::vector<Cell>> level0_override;
};

// All samplers are deterministic in (cfg, seed, strategy). Level lambda draws
// from Rng(seed).child(lambda); within a level, cells are visited row-major
// over the level grid (CI), or parent by parent with children row-major
// inside the b x b block (DCSD).

// Bernoulli(P^K[i,j]) for every cell. CapExceeded when N_v^2 > dense_cap.
[[nodiscard]] SampleResult sample_kpgm_naive(const ModelConfig& cfg, std::uint64_t seed,
                                             const SampleOptions& opts = {});

// Ancestral sampling of every hierarchy RV, inactive parents included.
// CapExceeded when ci_rv_count(cfg) > dense_cap.
[[nodiscard]] SampleResult sample_mkpgm_ci(const ModelConfig& cfg, std::uint64_t seed,
                                           const SampleOptions& opts = {});

// Ancestral sampling restricted to children of active cells. Memory is
// proportional to the active cells; level 0 is enumerated in full.
[[nodiscard]] SampleResult sample_mkpgm_dcsd(const ModelConfig& cfg, std::uint64_t seed,
                                             const SampleOptions& opts = {});

// As DCSD, but each tied level draws one Binomial(T_k, pi_k) count per
// distinct theta value and places it uniformly among that group's cells.
[[nodiscard]] SampleResult sample_mkpgm_gp(const ModelConfig& cfg, std::uint64_t seed,
                                           const SampleOptions& opts = {});

// Group sampling over the unique probabilities of P^K.
[[nodiscard]] SampleResult sample_kpgm_gp(const ModelConfig& cfg, std::uint64_t seed,
                                          const SampleOptions& opts = {});

[[nodiscard]] SampleResult sample(Strategy strategy, const ModelConfig& cfg, std::uint64_t seed,
                                  const SampleOptions& opts = {});

}  // namespace gnm
