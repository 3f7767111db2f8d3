#include "gnm/bn.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "gnm/error.hpp"
#include "gnm/rng.hpp"
#include "json.hpp"

namespace gnm {

namespace {

std::string describe(const NodeId& id) {
  return "(" + std::to_string(id.lambda) + ", " + std::to_string(id.row) + ", " + std::to_string(id.col) + ")";
}

}  // namespace

BayesNet::BayesNet(ModelConfig cfg, std::vector<std::vector<BnNode>> levels)
    : cfg_(std::move(cfg)), levels_(std::move(levels)) {
  validate_config(cfg_);
  if (levels_.size() != cfg_.tied_levels() + 1) {
    throw Error(ErrorCode::kBadArgs, "network needs K-ell+1 levels");
  }
  const std::uint32_t b = cfg_.b();
  for (std::uint32_t lambda = 0; lambda < levels_.size(); ++lambda) {
    const std::uint64_t side = cfg_.level_side(lambda);
    sides_.push_back(side);
    const auto& nodes = levels_[lambda];
    if (nodes.size() != side * side) {
      throw Error(ErrorCode::kBadArgs, "level " + std::to_string(lambda) + " must hold side^2 nodes");
    }
    for (std::uint64_t idx = 0; idx < nodes.size(); ++idx) {
      const BnNode& n = nodes[idx];
      const NodeId expected{lambda, idx / side, idx % side};
      if (n.id != expected) throw Error(ErrorCode::kBadArgs, "node " + describe(n.id) + " out of row-major order");
      if (lambda == 0) {
        if (n.parent || !n.prior) throw Error(ErrorCode::kBadArgs, "root " + describe(n.id) + " needs a prior and no parent");
      } else {
        const NodeId parent{lambda - 1, n.id.row / b, n.id.col / b};
        if (!n.parent || *n.parent != parent || n.prior) {
          throw Error(ErrorCode::kBadArgs, "node " + describe(n.id) + " must have parent " + describe(parent));
        }
      }
    }
  }
}

std::uint64_t BayesNet::node_count() const noexcept {
  std::uint64_t total = 0;
  for (const auto& level : levels_) total += level.size();
  return total;
}

bool BayesNet::contains(const NodeId& id) const noexcept {
  return id.lambda < levels_.size() && id.row < sides_[id.lambda] && id.col < sides_[id.lambda];
}

const BnNode& BayesNet::node(const NodeId& id) const {
  if (!contains(id)) throw Error(ErrorCode::kIndexOutOfRange, "no node " + describe(id));
  return levels_[id.lambda][id.row * sides_[id.lambda] + id.col];
}

std::vector<NodeId> BayesNet::children(const NodeId& id) const {
  (void)node(id);
  std::vector<NodeId> out;
  if (id.lambda + 1 >= levels_.size()) return out;
  const std::uint32_t b = cfg_.b();
  for (std::uint32_t x = 0; x < b; ++x) {
    for (std::uint32_t y = 0; y < b; ++y) out.push_back({id.lambda + 1, id.row * b + x, id.col * b + y});
  }
  return out;
}

NodeId BayesNet::root_of(const NodeId& id) const {
  (void)node(id);
  NodeId cur = id;
  while (cur.lambda > 0) cur = *node(cur).parent;
  return cur;
}

BayesNet build_bn(const ModelConfig& cfg, std::uint64_t cap) {
  validate_config(cfg);
  const std::uint64_t total = ci_rv_count(cfg);
  if (total > cap) {
    throw Error(ErrorCode::kCapExceeded, "network would have " + std::to_string(total) +
                                             " nodes, above the cap of " + std::to_string(cap));
  }
  const std::uint32_t b = cfg.b();
  const DenseProbMatrix priors = kronecker_power(cfg.theta, cfg.ell, cap);

  std::vector<std::vector<BnNode>> levels;
  for (std::uint32_t lambda = 0; lambda <= cfg.tied_levels(); ++lambda) {
    const std::uint64_t side = cfg.level_side(lambda);
    std::vector<BnNode> nodes;
    nodes.reserve(side * side);
    for (std::uint64_t r = 0; r < side; ++r) {
      for (std::uint64_t c = 0; c < side; ++c) {
        BnNode n{{lambda, r, c}, std::nullopt, {}, std::nullopt};
        if (lambda == 0) {
          n.prior = priors.at(r, c);
        } else {
          n.parent = NodeId{lambda - 1, r / b, c / b};
          n.cpt = {cfg.theta.at(static_cast<std::uint32_t>(r % b), static_cast<std::uint32_t>(c % b)), 0.0};
        }
        nodes.push_back(n);
      }
    }
    levels.push_back(std::move(nodes));
  }
  return BayesNet(cfg, std::move(levels));
}

SampleResult ancestral_sample(const BayesNet& bn, std::uint64_t seed) {
  const Rng root(seed);
  std::vector<std::uint8_t> previous;
  std::vector<std::uint8_t> current;
  std::vector<LevelRecord> records;

  for (std::uint32_t lambda = 0; lambda < bn.level_count(); ++lambda) {
    Rng rng = root.child(lambda);
    const auto nodes = bn.level(lambda);
    const std::uint64_t parent_side = lambda == 0 ? 0 : bn.side(lambda - 1);
    current.assign(nodes.size(), 0);
    std::uint64_t active = 0;
    for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
      const BnNode& n = nodes[idx];
      double p;
      if (n.parent) {
        const bool parent_on = previous[n.parent->row * parent_side + n.parent->col] != 0;
        p = parent_on ? n.cpt.p_given_parent_one : n.cpt.p_given_parent_zero;
      } else {
        p = *n.prior;
      }
      const bool on = rng.bernoulli(p);
      current[idx] = on;
      active += on;
    }
    records.push_back({lambda, nodes.size(), active});
    previous.swap(current);
  }

  const std::uint32_t last = bn.level_count() - 1;
  const std::uint64_t side = bn.side(last);
  std::vector<Cell> cells;
  for (std::uint64_t idx = 0; idx < previous.size(); ++idx) {
    if (previous[idx]) cells.push_back({idx / side, idx % side});
  }
  return SampleResult{make_network(bn.config(), std::move(cells)),
                      SampleTrace{seed, Strategy::kCi, std::move(records)}};
}

bool check_dcsd(const BayesNet& bn) {
  for (std::uint32_t lambda = 1; lambda < bn.level_count(); ++lambda) {
    for (const auto& n : bn.level(lambda)) {
      if (n.cpt.p_given_parent_zero != 0.0 || !(n.cpt.p_given_parent_one > 0.0)) return false;
    }
  }
  return true;
}

bool check_csi(const BayesNet& bn, const NodeId& x, const NodeId& y, const Context& context,
               std::size_t max_free_nodes) {
  if (x == y) throw Error(ErrorCode::kBadArgs, "check_csi needs distinct x and y");
  if (!bn.contains(x) || !bn.contains(y)) throw Error(ErrorCode::kBadArgs, "unknown query node");

  std::map<NodeId, int> assigned;  // -1 free, 0/1 context value
  for (const auto& [id, value] : context) {
    if (!bn.contains(id)) throw Error(ErrorCode::kBadArgs, "unknown context node " + describe(id));
    if (id == x || id == y) throw Error(ErrorCode::kBadArgs, "context must not assign x or y");
    if (!assigned.emplace(id, value ? 1 : 0).second) {
      throw Error(ErrorCode::kBadArgs, "context assigns " + describe(id) + " twice");
    }
  }
  if (context.empty() && bn.root_of(x) != bn.root_of(y)) return true;

  // Ancestral closure. Nodes outside it are barren and marginalise to 1.
  // std::map orders by level first, which is a topological order.
  std::map<NodeId, int> closure;
  auto add_with_ancestors = [&](NodeId id) {
    for (;;) {
      auto it = assigned.find(id);
      if (!closure.emplace(id, it == assigned.end() ? -1 : it->second).second) return;
      if (id.lambda == 0) return;
      id = *bn.node(id).parent;
    }
  };
  add_with_ancestors(x);
  add_with_ancestors(y);
  for (const auto& entry : context) add_with_ancestors(entry.first);

  struct Slot {
    const BnNode* node;
    int parent_slot;  // -1 for roots
    int fixed;        // -1 when free
  };
  std::vector<Slot> slots;
  std::map<NodeId, int> slot_of;
  for (const auto& [id, fixed] : closure) {
    const BnNode& n = bn.node(id);
    const int parent_slot = n.parent ? slot_of.at(*n.parent) : -1;
    slot_of.emplace(id, static_cast<int>(slots.size()));
    slots.push_back({&n, parent_slot, fixed});
  }
  std::vector<int> free_slots;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].fixed < 0) free_slots.push_back(static_cast<int>(i));
  }
  if (free_slots.size() > max_free_nodes) {
    throw Error(ErrorCode::kCapExceeded, "CSI enumeration over " + std::to_string(free_slots.size()) +
                                             " free nodes exceeds the limit of " +
                                             std::to_string(max_free_nodes));
  }

  const int x_slot = slot_of.at(x);
  const int y_slot = slot_of.at(y);
  std::array<std::array<double, 2>, 2> joint{};  // joint[x][y] with the context fixed
  std::vector<int> value(slots.size());
  const std::uint64_t assignments = std::uint64_t{1} << free_slots.size();
  for (std::uint64_t mask = 0; mask < assignments; ++mask) {
    for (std::size_t f = 0; f < free_slots.size(); ++f) value[free_slots[f]] = (mask >> f) & 1;
    double weight = 1.0;
    for (std::size_t i = 0; i < slots.size() && weight > 0.0; ++i) {
      const Slot& s = slots[i];
      if (s.fixed >= 0) value[i] = s.fixed;
      double p_one;
      if (s.parent_slot < 0) {
        p_one = *s.node->prior;
      } else {
        p_one = value[s.parent_slot] ? s.node->cpt.p_given_parent_one : s.node->cpt.p_given_parent_zero;
      }
      weight *= value[i] ? p_one : 1.0 - p_one;
    }
    joint[value[x_slot]][value[y_slot]] += weight;
  }

  const double p_context = joint[0][0] + joint[0][1] + joint[1][0] + joint[1][1];
  if (!(p_context > 0.0)) return true;
  const double p_x_given_context = (joint[1][0] + joint[1][1]) / p_context;
  for (int yv = 0; yv < 2; ++yv) {
    const double p_y = joint[0][yv] + joint[1][yv];
    if (!(p_y > 0.0)) continue;
    if (std::abs(joint[1][yv] / p_y - p_x_given_context) > 1e-9) return false;
  }
  return true;
}

std::string bn_to_json(const BayesNet& bn) {
  using nlohmann::ordered_json;
  ordered_json nodes = ordered_json::array();
  for (const auto& level : bn.levels()) {
    for (const auto& n : level) {
      ordered_json entry;
      entry["id"] = {n.id.lambda, n.id.row, n.id.col};
      entry["parent"] = n.parent ? ordered_json{n.parent->lambda, n.parent->row, n.parent->col} : ordered_json(nullptr);
      entry["prior"] = n.prior ? ordered_json(*n.prior) : ordered_json(nullptr);
      entry["cpt"] = {{"p1", n.cpt.p_given_parent_one}, {"p0", n.cpt.p_given_parent_zero}};
      nodes.push_back(std::move(entry));
    }
  }
  ordered_json doc;
  doc["config"] = ordered_json::parse(config_to_json(bn.config()));
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

}  // namespace gnm
