#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gnm/config.hpp"
#include "gnm/network.hpp"

namespace gnm {

// Default limit on the number of theta-exponent compositions enumerated for
// KPGM group sampling.
inline constexpr std::uint64_t kDefaultGroupCap = std::uint64_t{1} << 20;

struct ThetaPosition {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  auto operator<=>(const ThetaPosition&) const = default;
};

// Cells of a tied-level group: every active parent crossed with the block
// positions holding the group's theta value. Rank r maps to parent r / |positions|
// and position r % |positions|.
struct BlockCells {
  std::uint64_t parents = 0;
  std::vector<ThetaPosition> positions;  // row-major within the b x b block
};

// One exponent vector over the distinct theta values: counts[s] factors equal
// to distinct value s, summing to K. `cells` is the number of P^K cells
// carrying exactly this multiset of factors.
struct Composition {
  std::vector<std::uint32_t> counts;
  std::uint64_t cells = 0;
};

// Cells of a KPGM group. Several compositions share a group when their
// products are numerically equal; ranks index the compositions in order.
struct CompositionCells {
  std::vector<Composition> compositions;
};

struct ProbabilityGroup {
  double pi = 0.0;
  std::uint64_t t = 0;
  std::variant<BlockCells, CompositionCells> cell_source;
};

// Distinct theta values with the block positions holding each, ascending by value.
struct DistinctTheta {
  std::vector<double> values;
  std::vector<std::vector<ThetaPosition>> positions;
};

[[nodiscard]] DistinctTheta distinct_theta(const ThetaMatrix& theta);

// Groups for one tied level with `active_parents` active cells above it,
// ascending by pi. Sum of t equals b^2 * active_parents.
[[nodiscard]] std::vector<ProbabilityGroup> tied_level_groups(const ThetaMatrix& theta,
                                                              std::uint64_t active_parents);

struct KpgmGroups {
  DistinctTheta distinct;
  std::uint32_t b = 0;
  std::uint32_t big_k = 0;
  std::vector<ProbabilityGroup> groups;  // ascending by pi
};

// Unique probabilities of P^K with their cell counts. Throws
// GroupCapExceeded when the composition count exceeds group_cap, Overflow
// when (b^2)^K does not fit in 64 bits.
[[nodiscard]] KpgmGroups kpgm_groups(const ModelConfig& cfg,
                                     std::uint64_t group_cap = kDefaultGroupCap);

// The rank-th cell (0 <= rank < group.t) of a KPGM group. Ranks enumerate
// compositions in order; inside a composition, the factor-value sequence is
// unranked as a multiset permutation (lexicographic over value indices),
// followed by a mixed-radix choice among equal-valued theta positions.
[[nodiscard]] Cell unrank_kpgm_cell(const KpgmGroups& groups, const ProbabilityGroup& group,
                                    std::uint64_t rank);

}  // namespace gnm
