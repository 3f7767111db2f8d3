#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gnm/error.hpp"
#include "gnm/groups.hpp"
#include "gnm/kron.hpp"
#include "oracles.hpp"

namespace {

gnm::ModelConfig make_cfg(const oracle::Matrix& rows, std::uint32_t k, std::uint32_t ell = 1) {
  gnm::ModelConfig cfg;
  cfg.theta = gnm::ThetaMatrix::from_rows(rows);
  cfg.big_k = k;
  cfg.ell = ell;
  return cfg;
}

std::uint64_t total_t(const std::vector<gnm::ProbabilityGroup>& groups) {
  std::uint64_t t = 0;
  for (const auto& g : groups) t += g.t;
  return t;
}

TEST(DistinctTheta, SortedWithPositions) {
  const auto d = gnm::distinct_theta(gnm::ThetaMatrix::from_rows({{0.5, 0.2}, {0.5, 0.9}}));
  EXPECT_EQ(d.values, (std::vector<double>{0.2, 0.5, 0.9}));
  ASSERT_EQ(d.positions.size(), 3u);
  EXPECT_EQ(d.positions[1], (std::vector<gnm::ThetaPosition>{{0, 0}, {1, 0}}));
}

TEST(TiedLevelGroups, OneGroupPerDistinctValue) {
  const auto theta = gnm::ThetaMatrix::from_rows({{0.5, 0.2}, {0.5, 0.9}});
  const auto groups = gnm::tied_level_groups(theta, 7);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_DOUBLE_EQ(groups[0].pi, 0.2);
  EXPECT_EQ(groups[0].t, 7u);
  EXPECT_DOUBLE_EQ(groups[1].pi, 0.5);
  EXPECT_EQ(groups[1].t, 14u);
  EXPECT_EQ(total_t(groups), 4u * 7u);
  const auto& cells = std::get<gnm::BlockCells>(groups[1].cell_source);
  EXPECT_EQ(cells.parents, 7u);
  EXPECT_EQ(cells.positions.size(), 2u);
  EXPECT_EQ(gnm::tied_level_groups(theta, 0).size(), 3u);
  EXPECT_EQ(total_t(gnm::tied_level_groups(theta, 0)), 0u);
}

TEST(KpgmGroups, ReferenceThetaAtTwoLevels) {
  const auto g = gnm::kpgm_groups(make_cfg(oracle::reference_theta(), 2));
  ASSERT_EQ(g.groups.size(), 10u);
  EXPECT_EQ(total_t(g.groups), 16u);
  EXPECT_DOUBLE_EQ(g.groups.front().pi, 0.09);
  EXPECT_EQ(g.groups.front().t, 1u);
  EXPECT_DOUBLE_EQ(g.groups.back().pi, 0.81);
  // 0.9 * 0.7 appears at two cells of P^2.
  const auto it = std::find_if(g.groups.begin(), g.groups.end(),
                               [](const auto& grp) { return std::abs(grp.pi - 0.63) < 1e-15; });
  ASSERT_NE(it, g.groups.end());
  EXPECT_EQ(it->t, 2u);
}

TEST(KpgmGroups, SingleLevelIsDistinctTheta) {
  const auto g = gnm::kpgm_groups(make_cfg({{0.5, 0.3}, {0.5, 0.5}}, 1));
  ASSERT_EQ(g.groups.size(), 2u);
  EXPECT_EQ(g.groups[0].t, 1u);
  EXPECT_EQ(g.groups[1].t, 3u);
}

TEST(KpgmGroups, EqualProductsMerge) {
  // Powers of two: products collapse onto exponents 0..6.
  const auto g = gnm::kpgm_groups(make_cfg({{0.5, 0.25}, {1.0, 0.125}}, 2));
  ASSERT_EQ(g.groups.size(), 7u);
  EXPECT_EQ(total_t(g.groups), 16u);
  for (std::size_t i = 0; i < g.groups.size(); ++i) EXPECT_DOUBLE_EQ(g.groups[i].pi, std::ldexp(1.0, -6 + int(i)));
}

TEST(KpgmGroups, CapAndOverflow) {
  EXPECT_THROW((void)gnm::kpgm_groups(make_cfg(oracle::reference_theta(), 10), 5), gnm::Error);
  try {
    (void)gnm::kpgm_groups(make_cfg(oracle::reference_theta(), 10), 5);
  } catch (const gnm::Error& e) {
    EXPECT_EQ(e.code(), gnm::ErrorCode::kGroupCapExceeded);
  }
  try {
    (void)gnm::kpgm_groups(make_cfg(oracle::reference_theta(), 40));
    FAIL();
  } catch (const gnm::Error& e) {
    EXPECT_EQ(e.code(), gnm::ErrorCode::kOverflow);
  }
}

struct UnrankCase {
  oracle::Matrix theta;
  std::uint32_t k;
};

class UnrankBijection : public ::testing::TestWithParam<UnrankCase> {};

// Unranking every group must cover each P^K cell exactly once, and each cell
// must carry (to rounding) its group's probability per the dense oracle.
TEST_P(UnrankBijection, CoversDenseMatrix) {
  const auto& [rows, k] = GetParam();
  const auto cfg = make_cfg(rows, k);
  const auto groups = gnm::kpgm_groups(cfg);
  const auto dense = oracle::kron_power(rows, k);
  const std::size_t side = dense.size();
  EXPECT_EQ(total_t(groups.groups), side * side);
  std::set<gnm::Cell> seen;
  for (const auto& g : groups.groups) {
    for (std::uint64_t r = 0; r < g.t; ++r) {
      const auto c = gnm::unrank_kpgm_cell(groups, g, r);
      ASSERT_LT(c.row, side);
      ASSERT_LT(c.col, side);
      ASSERT_TRUE(seen.insert(c).second);
      EXPECT_NEAR(dense[c.row][c.col], g.pi, 1e-12 * std::max(1.0, g.pi));
    }
  }
  EXPECT_EQ(seen.size(), side * side);
}

INSTANTIATE_TEST_SUITE_P(Configs, UnrankBijection,
                         ::testing::Values(UnrankCase{oracle::reference_theta(), 1}, UnrankCase{oracle::reference_theta(), 3},
                                           UnrankCase{oracle::reference_theta(), 5},
                                           UnrankCase{{{0.5, 0.25}, {1.0, 0.125}}, 4},
                                           UnrankCase{{{0.5, 0.5}, {0.5, 0.2}}, 4},
                                           UnrankCase{{{0.9, 0.1, 0.4}, {0.1, 0.4, 0.0}, {0.9, 0.3, 0.2}}, 3}),
                         [](const auto& info) {
                           return "b" + std::to_string(info.param.theta.size()) + "K" +
                                  std::to_string(info.param.k) + "_" + std::to_string(info.index);
                         });

// Exhaustive count of equal-valued dense cells agrees with group sizes when
// the theta values are generic.
TEST(KpgmGroups, SizesMatchExhaustiveCount) {
  const auto rows = oracle::Matrix{{0.91, 0.73}, {0.37, 0.19}};
  const auto groups = gnm::kpgm_groups(make_cfg(rows, 4));
  const auto dense = oracle::kron_power(rows, 4);
  for (const auto& g : groups.groups) {
    std::uint64_t count = 0;
    for (const auto& row : dense)
      for (double v : row)
        if (std::abs(v - g.pi) <= 1e-12) ++count;
    EXPECT_EQ(count, g.t) << g.pi;
  }
}

}  // namespace
