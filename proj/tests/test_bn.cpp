#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "gnm/bn.hpp"
#include "gnm/error.hpp"
#include "gnm/rng.hpp"
#include "gnm/samplers.hpp"
#include "oracles.hpp"

namespace {

using gnm::NodeId;

gnm::ModelConfig make_cfg(const oracle::Matrix& rows, std::uint32_t k, std::uint32_t ell) {
  gnm::ModelConfig cfg;
  cfg.theta = gnm::ThetaMatrix::from_rows(rows);
  cfg.big_k = k;
  cfg.ell = ell;
  return cfg;
}

gnm::ModelConfig reference() { return make_cfg(oracle::reference_theta(), 3, 2); }

TEST(BuildBn, ReferenceStructure) {
  const auto bn = gnm::build_bn(reference());
  EXPECT_EQ(bn.node_count(), 80u);
  ASSERT_EQ(bn.level_count(), 2u);
  EXPECT_EQ(bn.level(0).size(), 16u);
  EXPECT_EQ(bn.level(1).size(), 64u);
  for (const auto& root : bn.level(0)) {
    EXPECT_FALSE(root.parent);
    ASSERT_TRUE(root.prior);
    EXPECT_EQ(bn.children(root.id).size(), 4u);
  }
  EXPECT_NEAR(*bn.node({0, 0, 0}).prior, 0.81, 1e-15);
  EXPECT_NEAR(*bn.node({0, 3, 3}).prior, 0.09, 1e-15);
  const auto& child = bn.node({1, 5, 2});
  EXPECT_EQ(*child.parent, (NodeId{0, 2, 1}));
  EXPECT_DOUBLE_EQ(child.cpt.p_given_parent_one, 0.5);
  EXPECT_DOUBLE_EQ(child.cpt.p_given_parent_zero, 0.0);
  EXPECT_EQ(bn.root_of({1, 5, 2}), (NodeId{0, 2, 1}));
  EXPECT_TRUE(bn.children({1, 5, 2}).empty());
  EXPECT_FALSE(bn.contains({2, 0, 0}));
  EXPECT_THROW((void)bn.node({1, 8, 0}), gnm::Error);
}

TEST(BuildBn, UntiedOnlyIsAllRoots) {
  const auto bn = gnm::build_bn(make_cfg(oracle::reference_theta(), 3, 3));
  EXPECT_EQ(bn.level_count(), 1u);
  EXPECT_EQ(bn.node_count(), 64u);
}

TEST(BuildBn, NodeCountMatchesClosedForm) {
  for (std::uint32_t b : {2u, 3u}) {
    oracle::Matrix rows(b, std::vector<double>(b, 0.5));
    for (std::uint32_t k = 1; k <= 5; ++k) {
      for (std::uint32_t ell = 1; ell <= k; ++ell) {
        const auto cfg = make_cfg(rows, k, ell);
        if (gnm::ci_rv_count(cfg) > 2000000) continue;
        EXPECT_EQ(gnm::build_bn(cfg).node_count(), oracle::ci_count_closed_form(b, k, ell));
      }
    }
  }
}

TEST(BuildBn, CapRefusal) {
  EXPECT_THROW((void)gnm::build_bn(reference(), 79), gnm::Error);
}

TEST(BayesNetCtor, RejectsMalformedStructure) {
  const auto bn = gnm::build_bn(reference());
  auto levels = bn.levels();
  levels[1][3].parent = NodeId{0, 3, 3};
  EXPECT_THROW(gnm::BayesNet(reference(), levels), gnm::Error);
  levels = bn.levels();
  levels[0][0].prior.reset();
  EXPECT_THROW(gnm::BayesNet(reference(), levels), gnm::Error);
  levels = bn.levels();
  levels.pop_back();
  EXPECT_THROW(gnm::BayesNet(reference(), levels), gnm::Error);
}

TEST(AncestralSample, AgreesWithCiDrawForDraw) {
  for (const auto& cfg : {reference(), make_cfg(oracle::reference_theta(), 5, 1),
                          make_cfg({{0.9, 0.1, 0.4}, {0.1, 0.4, 0.0}, {0.9, 0.3, 0.2}}, 3, 1)}) {
    const auto bn = gnm::build_bn(cfg);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = gnm::ancestral_sample(bn, seed);
      const auto c = gnm::sample_mkpgm_ci(cfg, seed);
      EXPECT_EQ(a.network, c.network);
      EXPECT_EQ(a.trace, c.trace);
    }
  }
}

TEST(CheckDcsd, Predicate) {
  const auto bn = gnm::build_bn(reference());
  EXPECT_TRUE(gnm::check_dcsd(bn));
  auto levels = bn.levels();
  levels[1][10].cpt.p_given_parent_zero = 0.1;
  EXPECT_FALSE(gnm::check_dcsd(gnm::BayesNet(reference(), levels)));
  EXPECT_FALSE(gnm::check_dcsd(gnm::build_bn(make_cfg({{0.9, 0.0}, {0.5, 0.3}}, 3, 2))));
  EXPECT_TRUE(gnm::check_dcsd(gnm::build_bn(make_cfg(oracle::reference_theta(), 2, 2))));
}

TEST(CheckCsi, ReferenceExamples) {
  const auto bn = gnm::build_bn(reference());
  const NodeId parent{0, 0, 0}, a{1, 0, 0}, b{1, 0, 1}, other{1, 7, 7};
  EXPECT_FALSE(gnm::check_csi(bn, a, b, {}));
  EXPECT_TRUE(gnm::check_csi(bn, a, b, {{parent, true}}));
  EXPECT_TRUE(gnm::check_csi(bn, a, b, {{parent, false}}));
  EXPECT_TRUE(gnm::check_csi(bn, a, other, {}));
  EXPECT_FALSE(gnm::check_csi(bn, parent, a, {}));
  EXPECT_TRUE(gnm::check_csi(bn, b, a, {{parent, true}}));
  EXPECT_THROW((void)gnm::check_csi(bn, a, a, {}), gnm::Error);
  EXPECT_THROW((void)gnm::check_csi(bn, a, b, {{a, true}}), gnm::Error);
  EXPECT_THROW((void)gnm::check_csi(bn, a, {2, 0, 0}, {}), gnm::Error);
  EXPECT_THROW((void)gnm::check_csi(bn, a, b, {{parent, true}, {parent, false}}), gnm::Error);
}

TEST(CheckCsi, EnumerationCap) {
  const auto bn = gnm::build_bn(make_cfg({{0.5, 0.5}, {0.5, 0.5}}, 4, 1));
  // Three levels below a common root; the leaves share only that root.
  EXPECT_THROW((void)gnm::check_csi(bn, {3, 0, 0}, {3, 7, 7}, {}, 2), gnm::Error);
  EXPECT_FALSE(gnm::check_csi(bn, {3, 0, 0}, {3, 7, 7}, {}));
  EXPECT_TRUE(gnm::check_csi(bn, {3, 0, 0}, {3, 7, 7}, {{{1, 0, 0}, true}}));
}

// Full-joint brute force over every node of a small tree.
struct Joint {
  std::vector<NodeId> ids;
  std::vector<double> probs;  // indexed by assignment bitmask

  explicit Joint(const gnm::BayesNet& bn) {
    std::vector<const gnm::BnNode*> nodes;
    for (const auto& level : bn.levels())
      for (const auto& n : level) {
        nodes.push_back(&n);
        ids.push_back(n.id);
      }
    std::vector<std::size_t> parent(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i]->parent) parent[i] = index_of(*nodes[i]->parent);
    probs.resize(std::size_t{1} << nodes.size());
    for (std::uint64_t mask = 0; mask < probs.size(); ++mask) {
      double p = 1.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double p1 = nodes[i]->prior ? *nodes[i]->prior
                                          : (((mask >> parent[i]) & 1) ? nodes[i]->cpt.p_given_parent_one
                                                                        : nodes[i]->cpt.p_given_parent_zero);
        p *= ((mask >> i) & 1) ? p1 : 1 - p1;
      }
      probs[mask] = p;
    }
  }

  std::size_t index_of(const NodeId& id) const {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  }

  bool independent(const NodeId& x, const NodeId& y, const gnm::Context& ctx) const {
    const std::size_t xi = index_of(x), yi = index_of(y);
    std::uint64_t ctx_mask = 0, ctx_value = 0;
    for (const auto& [id, v] : ctx) {
      ctx_mask |= std::uint64_t{1} << index_of(id);
      if (v) ctx_value |= std::uint64_t{1} << index_of(id);
    }
    std::array<std::array<double, 2>, 2> t{};
    for (std::uint64_t mask = 0; mask < probs.size(); ++mask)
      if ((mask & ctx_mask) == ctx_value) t[(mask >> xi) & 1][(mask >> yi) & 1] += probs[mask];
    const double pc = t[0][0] + t[0][1] + t[1][0] + t[1][1];
    if (pc <= 0) return true;
    const double px = (t[1][0] + t[1][1]) / pc;
    for (int v = 0; v < 2; ++v) {
      const double py = t[0][v] + t[1][v];
      if (py > 0 && std::abs(t[1][v] / py - px) > 1e-9) return false;
    }
    return true;
  }
};

TEST(CheckCsi, AgreesWithBruteForceOnRandomTrees) {
  gnm::Rng rng(31337);
  const double palette[] = {0.0, 0.5, 1.0, 0.3, 0.85};
  auto pick = [&] { return rng.below(3) == 0 ? palette[rng.below(5)] : rng.uniform(); };
  int dependent = 0, independent = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const auto cfg = make_cfg({{0.5, 0.5}, {0.5, 0.5}}, 2, 1);
    auto levels = gnm::build_bn(cfg).levels();
    for (auto& level : levels) {
      for (auto& n : level) {
        if (n.prior) {
          n.prior = pick();
        } else {
          n.cpt.p_given_parent_one = pick();
          n.cpt.p_given_parent_zero = rng.below(2) ? 0.0 : pick();
        }
      }
    }
    const gnm::BayesNet bn(cfg, levels);
    const Joint joint(bn);
    const auto& ids = joint.ids;
    for (int q = 0; q < 25; ++q) {
      // Bias queries towards a shared tree so dependence is common.
      const NodeId x = ids[rng.below(ids.size())];
      NodeId y = ids[rng.below(ids.size())];
      while (y == x || (q % 2 == 0 && bn.root_of(y) != bn.root_of(x))) y = ids[rng.below(ids.size())];
      gnm::Context ctx;
      for (int c = 0, m = int(rng.below(3)); c < m; ++c) {
        const NodeId z = ids[rng.below(ids.size())];
        bool clash = z == x || z == y;
        for (const auto& [id, v] : ctx) clash = clash || id == z;
        if (!clash) ctx.push_back({z, rng.below(2) == 1});
      }
      const bool expected = joint.independent(x, y, ctx);
      EXPECT_EQ(gnm::check_csi(bn, x, y, ctx), expected) << "trial " << trial << " query " << q;
      EXPECT_EQ(gnm::check_csi(bn, y, x, ctx), expected);
      (expected ? independent : dependent)++;
    }
  }
  EXPECT_GT(dependent, 20);
  EXPECT_GT(independent, 20);
}

TEST(BnJson, ListsEveryNode) {
  const auto json = gnm::bn_to_json(gnm::build_bn(reference()));
  std::size_t count = 0;
  for (auto pos = json.find("\"id\""); pos != std::string::npos; pos = json.find("\"id\"", pos + 1)) ++count;
  EXPECT_EQ(count, 80u);
  EXPECT_NE(json.find("\"p0\""), std::string::npos);
}

}  // namespace
