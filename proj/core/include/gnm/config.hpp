#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gnm {

// b x b seed matrix, row-major. Entries are edge probabilities in [0, 1].
struct ThetaMatrix {
  std::uint32_t side = 0;
  std::vector<double> entries;

  [[nodiscard]] static ThetaMatrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] double at(std::uint32_t row, std::uint32_t col) const {
    return entries[static_cast<std::size_t>(row) * side + col];
  }
  [[nodiscard]] double sum() const;
  [[nodiscard]] bool operator==(const ThetaMatrix&) const = default;
};

struct ModelConfig {
  ThetaMatrix theta;
  std::uint32_t big_k = 1;  // number of Kronecker levels
  std::uint32_t ell = 1;    // untied levels; tied levels are ell+1 .. big_k
  bool directed = true;
  bool allow_self_loops = true;

  [[nodiscard]] std::uint32_t b() const { return theta.side; }
  [[nodiscard]] std::uint32_t tied_levels() const { return big_k - ell; }
  // b^big_k. Only meaningful on a validated config.
  [[nodiscard]] std::uint64_t node_count() const;
  // Side length b^(ell + lambda) of the level-lambda cell grid.
  [[nodiscard]] std::uint64_t level_side(std::uint32_t lambda) const;

  [[nodiscard]] bool operator==(const ModelConfig&) const = default;
};

// Returns cfg unchanged or throws Error with EntryOutOfRange, BadLevels,
// Overflow (b^K does not fit in 64 bits) or BadConfig (malformed theta).
const ModelConfig& validate_config(const ModelConfig& cfg);

// {"b": 2, "theta": [[..],[..]], "K": 3, "ell": 2, "directed": true, "self_loops": true}
// directed and self_loops are optional and default to true.
[[nodiscard]] ModelConfig parse_config_json(std::string_view text);
[[nodiscard]] ModelConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string config_to_json(const ModelConfig& cfg);

}  // namespace gnm
