#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gnm/error.hpp"
#include "gnm/rng.hpp"
#include "oracles.hpp"

namespace {

TEST(Rng, DerivedStreamsAreReproducibleAndDistinct) {
  gnm::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_EQ(gnm::Rng(7).child(3)(), gnm::Rng(7).child(3)());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(gnm::derive_seed(7, s));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(gnm::derive_seed(1, 0), gnm::derive_seed(0, 1));
}

TEST(Rng, UniformAndBelowStayInRange) {
  gnm::Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
  EXPECT_THROW((void)rng.below(0), gnm::Error);
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(BinomialDraw, DegenerateProbabilities) {
  gnm::Rng rng(3);
  for (std::uint64_t n : {0ull, 1ull, 17ull, 1000000ull, 1ull << 40}) {
    EXPECT_EQ(gnm::binomial_draw(n, 0.0, rng), 0u);
    EXPECT_EQ(gnm::binomial_draw(n, 1.0, rng), n);
  }
  EXPECT_THROW((void)gnm::binomial_draw(10, 1.5, rng), gnm::Error);
  EXPECT_THROW((void)gnm::binomial_draw(10, -0.1, rng), gnm::Error);
}

TEST(BinomialDraw, LargeNMeanWithinFourSigma) {
  gnm::Rng rng(11);
  const std::uint64_t n = 1000000;
  const int draws = 1000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto x = gnm::binomial_draw(n, 0.5, rng);
    ASSERT_LE(x, n);
    sum += static_cast<double>(x);
  }
  const double sigma = std::sqrt(n * 0.25 / draws);
  EXPECT_NEAR(sum / draws, 500000.0, 4 * sigma);
}

struct GofCase {
  unsigned n;
  double p;
};

class BinomialGof : public ::testing::TestWithParam<GofCase> {};

// Both regimes: inversion (n*p < 10) and BTRS, each side of p = 0.5.
TEST_P(BinomialGof, MatchesExactPmf) {
  const auto [n, p] = GetParam();
  gnm::Rng rng(0xB1 + n);
  const std::uint64_t draws = 100000;
  std::vector<std::uint64_t> counts(n + 1, 0);
  for (std::uint64_t i = 0; i < draws; ++i) ++counts[gnm::binomial_draw(n, p, rng)];
  EXPECT_GT(oracle::gof_p_value(counts, oracle::binomial_pmf(n, p), draws), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Regimes, BinomialGof,
                         ::testing::Values(GofCase{20, 0.3}, GofCase{20, 0.7}, GofCase{5, 0.01}, GofCase{100, 0.2},
                                           GofCase{1000, 0.37}, GofCase{1000, 0.9}, GofCase{40, 0.5}));

TEST(ChooseWithoutReplacement, EdgeCases) {
  gnm::Rng rng(5);
  EXPECT_TRUE(gnm::choose_without_replacement(10, 0, rng).empty());
  const auto all = gnm::choose_without_replacement(6, 6, rng);
  EXPECT_EQ(all, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_THROW((void)gnm::choose_without_replacement(3, 4, rng), gnm::Error);
  const auto huge = gnm::choose_without_replacement(~std::uint64_t{0}, 5, rng);
  EXPECT_EQ(huge.size(), 5u);
  EXPECT_TRUE(std::is_sorted(huge.begin(), huge.end()));
  EXPECT_EQ(std::set<std::uint64_t>(huge.begin(), huge.end()).size(), 5u);
}

TEST(ChooseWithoutReplacement, SortedDistinctInRangeProperty) {
  gnm::Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t t = 1 + rng.below(200);
    const std::uint64_t x = rng.below(t + 1);
    const auto picks = gnm::choose_without_replacement(t, x, rng);
    ASSERT_EQ(picks.size(), x);
    for (std::size_t i = 0; i < picks.size(); ++i) {
      ASSERT_LT(picks[i], t);
      if (i > 0) ASSERT_LT(picks[i - 1], picks[i]);
    }
  }
}

// Every 2-subset of 5 (and, through the complement path, every 4-subset)
// should appear with frequency 1/C(5, x).
TEST(ChooseWithoutReplacement, UniformOverSubsets) {
  for (std::uint64_t x : {2ull, 4ull}) {
    gnm::Rng rng(1234 + x);
    const int draws = 100000;
    std::map<std::vector<std::uint64_t>, int> freq;
    for (int i = 0; i < draws; ++i) ++freq[gnm::choose_without_replacement(5, x, rng)];
    const double subsets = x == 2 ? 10.0 : 5.0;
    ASSERT_EQ(freq.size(), static_cast<std::size_t>(subsets));
    const double p = 1.0 / subsets;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    for (const auto& [subset, count] : freq) EXPECT_NEAR(static_cast<double>(count) / draws, p, 4 * sigma);
  }
}

}  // namespace
