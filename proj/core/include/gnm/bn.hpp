#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnm/config.hpp"
#include "gnm/kron.hpp"
#include "gnm/network.hpp"

namespace gnm {

struct NodeId {
  std::uint32_t lambda = 0;
  std::uint64_t row = 0;
  std::uint64_t col = 0;

  auto operator<=>(const NodeId&) const = default;
};

// Binary single-parent CPT: P(Z = 1 | parent = 1) and P(Z = 1 | parent = 0).
// The complementary P(Z = 0 | .) entries are implied.
struct Cpt {
  double p_given_parent_one = 0.0;
  double p_given_parent_zero = 0.0;

  bool operator==(const Cpt&) const = default;
};

struct BnNode {
  NodeId id;
  std::optional<NodeId> parent;  // empty for roots
  Cpt cpt;                       // unused for roots
  std::optional<double> prior;   // P(Z = 1), roots only
};

// Tree-structured Bayesian network over the mKPGM hierarchy. Level lambda
// stores (b^(ell+lambda))^2 nodes row-major; the parent of (lambda, r, c) is
// (lambda-1, r/b, c/b).
class BayesNet {
 public:
  // Checks the structural invariants; CPT values are taken as given so that
  // non-mKPGM networks can be expressed for the predicates below.
  BayesNet(ModelConfig cfg, std::vector<std::vector<BnNode>> levels);

  [[nodiscard]] const ModelConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] std::uint32_t level_count() const noexcept {
    return static_cast<std::uint32_t>(levels_.size());
  }
  [[nodiscard]] std::span<const BnNode> level(std::uint32_t lambda) const { return levels_.at(lambda); }
  [[nodiscard]] const std::vector<std::vector<BnNode>>& levels() const noexcept { return levels_; }
  [[nodiscard]] std::uint64_t side(std::uint32_t lambda) const { return sides_.at(lambda); }
  [[nodiscard]] std::uint64_t node_count() const noexcept;

  [[nodiscard]] bool contains(const NodeId& id) const noexcept;
  [[nodiscard]] const BnNode& node(const NodeId& id) const;
  [[nodiscard]] std::vector<NodeId> children(const NodeId& id) const;
  [[nodiscard]] NodeId root_of(const NodeId& id) const;

 private:
  ModelConfig cfg_;
  std::vector<std::vector<BnNode>> levels_;
  std::vector<std::uint64_t> sides_;
};

// Roots carry P^ell priors; every other node has CPT (theta_xy, 0) for its
// position (x, y) inside the parent's block. CapExceeded when
// ci_rv_count(cfg) > cap.
[[nodiscard]] BayesNet build_bn(const ModelConfig& cfg, std::uint64_t cap = kDefaultDenseCap);

// Samples every node level by level, row-major within a level, level lambda
// drawing from Rng(seed).child(lambda). This is the visiting order of
// sample_mkpgm_ci, so the two agree draw for draw on an mKPGM-built network.
[[nodiscard]] SampleResult ancestral_sample(const BayesNet& bn, std::uint64_t seed);

// True iff every non-root has P(Z=1 | parent=0) == 0 and P(Z=1 | parent=1) > 0.
[[nodiscard]] bool check_dcsd(const BayesNet& bn);

using Context = std::vector<std::pair<NodeId, bool>>;

// Decides x _|_ y | context by exact enumeration over the ancestral closure of
// {x, y} and the context nodes: for each y with P(y, context) > 0 the
// conditional P(x | y, context) must equal P(x | context) to within 1e-9.
// Throws BadArgs on x == y, unknown nodes or a context that mentions x or y,
// and CapExceeded when more than max_free_nodes unassigned nodes would need
// enumerating.
[[nodiscard]] bool check_csi(const BayesNet& bn, const NodeId& x, const NodeId& y,
                             const Context& context, std::size_t max_free_nodes = 24);

// {"config": {...}, "nodes": [{"id": [lambda,row,col], "parent": [..] | null,
//   "prior": p | null, "cpt": {"p1": .., "p0": ..}}]}
[[nodiscard]] std::string bn_to_json(const BayesNet& bn);

}  // namespace gnm
