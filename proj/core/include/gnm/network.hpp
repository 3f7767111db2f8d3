#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gnm/config.hpp"

namespace gnm {

struct Cell {
  std::uint64_t row = 0;
  std::uint64_t col = 0;

  auto operator<=>(const Cell&) const = default;
};

// Realised cells (Z = 1) of one hierarchy level, sorted and duplicate-free.
struct LevelState {
  std::uint32_t lambda = 0;
  std::uint64_t side = 0;
  std::vector<Cell> active_cells;
};

struct SampledNetwork {
  std::uint64_t n_nodes = 0;
  std::vector<Cell> edges;  // sorted, duplicate-free

  [[nodiscard]] bool operator==(const SampledNetwork&) const = default;
};

enum class Strategy {
  kNaiveKpgm,  // independent Bernoulli per cell of P^K
  kCi,         // every hierarchy RV, in level order
  kDcsd,       // only children of active parents
  kGp,         // mKPGM with binomial group draws at tied levels
  kKpgmGp,     // KPGM with binomial group draws over unique P^K values
};

[[nodiscard]] std::string_view to_string(Strategy s) noexcept;
// Accepts naive | ci | dcsd | gp | kpgm-gp. Throws BadArgs otherwise.
[[nodiscard]] Strategy parse_strategy(std::string_view name);

struct LevelRecord {
  std::uint32_t lambda = 0;
  std::uint64_t rvs_examined = 0;
  std::uint64_t rvs_active = 0;

  [[nodiscard]] bool operator==(const LevelRecord&) const = default;
};

struct SampleTrace {
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kDcsd;
  std::vector<LevelRecord> per_level;

  [[nodiscard]] std::uint64_t total_examined() const;
  [[nodiscard]] bool operator==(const SampleTrace&) const = default;
};

struct SampleResult {
  SampledNetwork network;
  SampleTrace trace;
};

// Whether the directed/self-loop mode of cfg retains a final-level cell.
[[nodiscard]] bool keeps_cell(const ModelConfig& cfg, const Cell& cell) noexcept;

// Drops cells excluded by the config's directed/self-loop mode. Undirected
// keeps row < col (row <= col when self-loops are allowed); otherwise, with
// self-loops disabled, drops row == col.
[[nodiscard]] SampledNetwork make_network(const ModelConfig& cfg, std::vector<Cell> final_cells);

// "row\tcol\n" per edge, in stored (lexicographic) order.
void write_edge_list(std::ostream& out, const SampledNetwork& net);
// {"seed":..,"strategy":"dcsd","per_level":[{"lambda":0,"examined":..,"active":..}]}
[[nodiscard]] std::string trace_to_json(const SampleTrace& trace);

}  // namespace gnm
