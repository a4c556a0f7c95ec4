#include "rdsforge/differential.hpp"

#include <map>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "rdsforge/families.hpp"

namespace rdsforge {
namespace {

// Naive oracle: for each a != 0, for each b, count x directly.
std::uint32_t naive_max_delta(const ValueTable& f) {
  std::uint32_t best = 0;
  for (Elem a = 1; a < f.size(); ++a) {
    for (Elem b = 0; b < f.size(); ++b) {
      std::uint32_t c = 0;
      for (Elem x = 0; x < f.size(); ++x) c += ((f[x ^ a] ^ f[x]) == b);
      best = std::max(best, c);
    }
  }
  return best;
}

TEST(DeltaCount, IdentityMap) {
  const Field f = make_field(4);
  const auto id = ValueTable::identity(f);
  for (Elem a = 1; a < 16; ++a) {
    for (Elem b = 0; b < 16; ++b) EXPECT_EQ(delta_count(id, a, b), b == a ? 16u : 0u);
  }
  EXPECT_THROW(delta_count(id, 0, 1), std::invalid_argument);
}

TEST(DeltaCount, CubeInGf8) {
  const Field f = make_field(3);
  const auto cube = power_map(f, 3);
  std::uint32_t total = 0;
  bool saw_two = false;
  for (Elem b = 0; b < 8; ++b) {
    const auto c = delta_count(cube, 1, b);
    EXPECT_TRUE(c == 0 || c == 2);
    saw_two = saw_two || c == 2;
    total += c;
  }
  EXPECT_TRUE(saw_two);
  EXPECT_EQ(total, 8u);
}

TEST(DiffSpectrum, Examples) {
  EXPECT_TRUE(is_apn(power_map(make_field(3), 3)));
  const auto id = diff_spectrum(ValueTable::identity(make_field(3)));
  EXPECT_EQ(id.max_delta, 8u);
  EXPECT_FALSE(is_apn(ValueTable::identity(make_field(3))));
  EXPECT_TRUE(is_apn(family_x3x4(make_field(5))));
}

TEST(DiffSpectrum, MatchesNaiveOracleAndSumRules) {
  std::mt19937 rng(11);
  for (int n : {3, 4, 5, 6}) {
    const Field f = make_field(n);
    std::uniform_int_distribution<Elem> pick(0, f.size() - 1);
    for (int t = 0; t < 6; ++t) {
      const auto table = ValueTable::tabulate(f, [&](Elem) { return pick(rng); });
      const auto s = diff_spectrum(table);
      ASSERT_EQ(s.max_delta, naive_max_delta(table));
      ASSERT_EQ(is_apn(table), s.max_delta == 2);
      std::uint64_t pairs = 0, weighted = 0;
      for (auto [delta, count] : s.histogram) {
        ASSERT_EQ(delta % 2, 0u) << "delta values are even in characteristic 2";
        pairs += count;
        weighted += std::uint64_t{delta} * count;
      }
      // Every (a, b) with a != 0 is counted once, and each a distributes 2^n inputs.
      ASSERT_EQ(pairs, std::uint64_t{f.size() - 1} * f.size());
      ASSERT_EQ(weighted, std::uint64_t{f.size() - 1} * f.size());
    }
  }
}

TEST(DiffSpectrum, ThreadCountDoesNotChangeResult) {
  const Field f = make_field(9);
  const auto t = family_paper_cubic(f, 5);
  const auto one = diff_spectrum(t, 1);
  const auto four = diff_spectrum(t, 4);
  EXPECT_EQ(one.max_delta, four.max_delta);
  EXPECT_EQ(one.histogram, four.histogram);
  EXPECT_EQ(is_apn(t, 1), is_apn(t, 3));
  EXPECT_FALSE(is_apn(power_map(f, 7), 3));
}

TEST(ImageProfile, Examples) {
  const Field f = make_field(3);
  const auto p = image_profile(family_paper_linear(f, 1));
  EXPECT_EQ(p.uniform_k, 2u);
  EXPECT_EQ(p.image, (std::vector<Elem>{0, 3, 5, 7}));
  EXPECT_EQ(image_profile(ValueTable::identity(f)).uniform_k, 1u);
  const auto skew = ValueTable(f, {0, 0, 0, 1, 2, 3, 4, 5});
  const auto ps = image_profile(skew);
  EXPECT_FALSE(ps.uniform_k.has_value());
  EXPECT_EQ(ps.multiplicities.at(0), 3u);
  EXPECT_FALSE(is_two_to_one(skew));
}

TEST(ImageProfile, SpecialFamilyTwoToOne) {
  for (int k = 2; k <= 7; ++k) {
    const Field f = make_field(2 * k - 1);
    const auto p = image_profile(family_special(f));
    ASSERT_EQ(p.uniform_k, 2u) << "k=" << k;
    std::uint64_t sum = 0;
    for (auto [v, c] : p.multiplicities) sum += c;
    ASSERT_EQ(sum, f.size());
    ASSERT_EQ(p.image.size() * 2, f.size());
  }
}

}  // namespace
}  // namespace rdsforge
