#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "sgs/random.hpp"

namespace sgs {
namespace {

TEST(DeriveSeed, DeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
      for (std::uint64_t i = 0; i < 20; ++i) seen.insert(derive_seed(s, stream, i));
    }
  }
  EXPECT_EQ(seen.size(), 8000u);
}

TEST(Uniform01, InUnitInterval) {
  Rng rng(3);
  double lo = 1.0;
  double hi = 0.0;
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(SampleWithoutReplacement, DistinctAndUniform) {
  std::vector<int> hits(50, 0);
  for (std::uint64_t rep = 0; rep < 4000; ++rep) {
    Rng rng = make_rng(9, 1, rep);
    const auto picks = sample_without_replacement(rng, 50, 10);
    ASSERT_EQ(picks.size(), 10u);
    std::set<std::size_t> unique(picks.begin(), picks.end());
    ASSERT_EQ(unique.size(), 10u);
    for (std::size_t p : picks) {
      ASSERT_LT(p, 50u);
      ++hits[p];
    }
  }
  // Each unit is picked with probability 1/5: 800 +- 4 sd.
  for (int h : hits) EXPECT_NEAR(h, 800, 4 * std::sqrt(4000 * 0.2 * 0.8));
}

TEST(SampleWithoutReplacement, WholePopulation) {
  Rng rng(1);
  auto picks = sample_without_replacement(rng, 7, 7);
  std::sort(picks.begin(), picks.end());
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(picks[i], i);
}

}  // namespace
}  // namespace sgs
