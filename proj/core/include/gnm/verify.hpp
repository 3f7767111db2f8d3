#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnm/config.hpp"
#include "gnm/kron.hpp"
#include "gnm/network.hpp"

namespace gnm {

// Thresholds shared by the statistical checks.
struct VerifyOptions {
  unsigned workers = 1;
  std::uint64_t dense_cap = kDefaultDenseCap;
  double z_threshold = 4.0;
  double p_threshold = 1e-3;
  std::size_t max_flagged = 2;
  double active_rel_tolerance = 0.05;
};

// Seed of replicate `index` of `strategy` under a master seed. Replicates of
// the same strategy share seeds; different strategies get independent streams.
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t master, Strategy strategy, std::uint64_t index);

struct CellMarginal {
  Cell cell;
  double theoretical = 0.0;
  double empirical = 0.0;
  double z_score = 0.0;  // +inf when theoretical is 0 or 1 and empirical differs
};

struct MarginalReport {
  Strategy strategy = Strategy::kDcsd;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double z_threshold = 4.0;
  std::vector<CellMarginal> cells;  // cells retained by the config's mode
  std::size_t flagged = 0;          // |z| > z_threshold
  bool passed = false;              // flagged <= max_flagged
};

// Per-cell edge frequencies over n_samples replicates against edge_prob.
// BadArgs for n_samples == 0, CapExceeded when N_v^2 > dense_cap.
[[nodiscard]] MarginalReport marginal_test(const ModelConfig& cfg, Strategy strategy, std::uint64_t n_samples,
                                           std::uint64_t seed, const VerifyOptions& opts = {});

struct PairedMarginal {
  Cell cell;
  double freq_a = 0.0;
  double freq_b = 0.0;
  double z_score = 0.0;
};

struct EquivalenceReport {
  Strategy strategy_a = Strategy::kCi;
  Strategy strategy_b = Strategy::kDcsd;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<PairedMarginal> cells;
  double max_abs_z = 0.0;
  // Edge-count histograms (index = edges in the sampled network).
  std::vector<std::uint64_t> histogram_a;
  std::vector<std::uint64_t> histogram_b;
  double chi_square = 0.0;
  std::uint32_t dof = 0;
  double p_value = 1.0;
  bool passed = false;  // max_abs_z <= z_threshold && p_value > p_threshold
};

// Two-sample comparison: pooled z-test per cell and a two-sample chi-square
// on the total-edge-count histograms (adjacent bins pooled until each holds
// at least 20 observations).
[[nodiscard]] EquivalenceReport equivalence_test(const ModelConfig& cfg, Strategy strategy_a, Strategy strategy_b,
                                                 std::uint64_t n_samples, std::uint64_t seed,
                                                 const VerifyOptions& opts = {});

struct StrategyComplexity {
  Strategy strategy = Strategy::kCi;
  double mean_rvs_examined = 0.0;
  double formula_value = 0.0;
  std::uint64_t ebound = 0;
  bool within_bound = false;  // mean_rvs_examined <= ebound
};

struct LevelActivity {
  std::uint32_t lambda = 0;
  double mean_active = 0.0;
  double expected = 0.0;
  double rel_error = 0.0;
  bool within_tolerance = false;
};

struct ComplexityReport {
  std::uint64_t n_runs = 0;
  std::uint64_t seed = 0;
  std::uint64_t ci_rv_count = 0;
  std::uint64_t ebound = 0;
  bool ci_checked = false;  // false when CI exceeds the dense cap
  bool ci_exact = false;    // every CI run examined exactly ci_rv_count
  double dcsd_expected_examined = 0.0;
  // Sum over levels of (b^2)^(ell+lambda) vs (sum Theta)^(ell+lambda).
  double ci_formula = 0.0;
  double dcsd_formula = 0.0;
  bool strict_inequality = false;
  std::vector<StrategyComplexity> strategies;
  std::vector<LevelActivity> dcsd_levels;
  bool passed = false;
};

[[nodiscard]] ComplexityReport complexity_audit(const ModelConfig& cfg, std::uint64_t n_runs, std::uint64_t seed,
                                                const VerifyOptions& opts = {});

struct DegreeStats {
  std::uint64_t n_nodes = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t max_out_degree = 0;
  std::uint64_t max_in_degree = 0;
  // histogram[d] = number of nodes with degree d.
  std::vector<std::uint64_t> out_degree_histogram;
  std::vector<std::uint64_t> in_degree_histogram;
};

[[nodiscard]] DegreeStats degree_stats(const SampledNetwork& net);

// Upper tail of the chi-square distribution.
[[nodiscard]] double chi_square_p_value(double statistic, double dof);

[[nodiscard]] std::string to_json(const MarginalReport& report);
[[nodiscard]] std::string to_json(const EquivalenceReport& report);
[[nodiscard]] std::string to_json(const ComplexityReport& report);
[[nodiscard]] std::string to_json(const DegreeStats& stats);
[[nodiscard]] std::string to_text(const MarginalReport& report);
[[nodiscard]] std::string to_text(const EquivalenceReport& report);
[[nodiscard]] std::string to_text(const ComplexityReport& report);

}  // namespace gnm
