#include "rdsforge/families.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "rdsforge/value_table.hpp"

namespace rdsforge {
namespace {

// Straight-line evaluation with repeated multiplication, independent of
// Field::pow and the branchless select in the family builders.
Elem slow_pow(const Field& f, Elem x, std::uint64_t e) {
  Elem r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = f.mul(r, x);
  return r;
}

unsigned slow_trace(const Field& f, Elem a) {
  Elem t = 0;
  for (int i = 0; i < f.n(); ++i, a = f.mul(a, a)) t ^= a;
  return t;
}

Elem slow_inv(const Field& f, Elem a) {
  for (Elem b = 1; b < f.size(); ++b) {
    if (f.mul(a, b) == 1) return b;
  }
  return 0;
}

TEST(PowerMap, Gf8Tables) {
  const Field f = make_field(3);
  EXPECT_EQ(power_map(f, 1), ValueTable::identity(f));
  const std::vector<Elem> cube{0, 1, 3, 4, 5, 6, 7, 2};
  const auto t = power_map(f, 3);
  EXPECT_EQ(std::vector<Elem>(t.values().begin(), t.values().end()), cube);
  EXPECT_TRUE(is_permutation(power_map(f, 2)));
  EXPECT_TRUE(is_linear(power_map(f, 2)));
  EXPECT_TRUE(is_permutation(power_map(f, 3)));
  EXPECT_FALSE(is_linear(power_map(f, 3)));
}

TEST(PaperLinear, Gf8Table) {
  const Field f = make_field(3);
  const auto t = family_paper_linear(f, 1);
  EXPECT_EQ(std::vector<Elem>(t.values().begin(), t.values().end()), (std::vector<Elem>{0, 0, 3, 3, 5, 5, 7, 7}));
  EXPECT_EQ(image_set(t), (std::vector<Elem>{0, 3, 5, 7}));
  for (Elem x = 0; x < 8; ++x) EXPECT_EQ(t[x], t[x ^ finv(f, 1)]);
}

TEST(PaperLinear, MatchesDirectFormula) {
  for (int n : {3, 5, 7}) {
    const Field f = make_field(n);
    for (Elem a = 1; a < f.size(); ++a) {
      const auto t = family_paper_linear(f, a);
      const Elem a3 = slow_pow(f, a, 3);
      const Elem ai = slow_inv(f, a);
      for (Elem x = 0; x < f.size(); ++x) {
        const Elem expect = slow_trace(f, f.mul(a3, slow_pow(f, x, 3))) ? x ^ ai : x;
        ASSERT_EQ(t[x], expect) << "n=" << n << " a=" << a << " x=" << x;
      }
    }
  }
}

TEST(PaperLinear, CollisionsAreExactlyTheInverseShift) {
  for (int n : {3, 5, 7, 9, 11}) {
    const Field f = make_field(n);
    const Elem step = n <= 7 ? 1 : (f.size() / 11) + 1;
    for (Elem a = 1; a < f.size(); a += step) {
      const auto t = family_paper_linear(f, a);
      const Elem ai = f.inv(a);
      // f(x) = f(y) iff x = y or x + y = a^{-1}: each value has the pair
      // {x, x + a^{-1}} as its full preimage.
      std::vector<std::uint32_t> hits(f.size(), 0);
      for (Elem x = 0; x < f.size(); ++x) {
        ASSERT_EQ(t[x], t[x ^ ai]);
        ++hits[t[x]];
      }
      for (auto h : hits) ASSERT_TRUE(h == 0 || h == 2);
    }
  }
}

TEST(PaperLinear, RejectsBadInput) {
  EXPECT_THROW(family_paper_linear(make_field(4), 1), std::invalid_argument);
  EXPECT_THROW(family_paper_linear(make_field(3), 0), std::invalid_argument);
  EXPECT_THROW(family_paper_linear(make_field(3), 8), std::invalid_argument);
}

TEST(PaperCubic, IsLinearComposedWithCube) {
  for (int n : {3, 5, 7, 9}) {
    const Field f = make_field(n);
    const auto cube = power_map(f, 3);
    const Elem step = n <= 7 ? 1 : 37;
    for (Elem a = 1; a < f.size(); a += step) {
      ASSERT_EQ(family_paper_cubic(f, a), compose(family_paper_linear(f, a), cube)) << "n=" << n << " a=" << a;
    }
  }
  const Field f = make_field(3);
  EXPECT_EQ(image_set(family_paper_cubic(f, 1)), (std::vector<Elem>{0, 3, 5, 7}));
}

TEST(LinearizedImage, Gf8AlphaOne) {
  const Field f = make_field(3);
  std::set<Elem> oracle;
  for (Elem x = 0; x < 8; ++x) oracle.insert(slow_pow(f, x, 2) ^ x);
  const auto img = linearized_image(f, 1);
  EXPECT_EQ(img, std::vector<Elem>(oracle.begin(), oracle.end()));
  EXPECT_EQ(img, (std::vector<Elem>{0, 2, 4, 6}));
}

TEST(LinearizedImage, SubspaceOfHalfSize) {
  for (int n : {3, 4, 5, 7}) {
    const Field f = make_field(n);
    std::vector<Elem> all(f.size());
    for (Elem x = 0; x < f.size(); ++x) all[x] = x;
    EXPECT_EQ(linearized_image(f, 0), all);
    for (Elem alpha = 1; alpha < f.size(); ++alpha) {
      const auto img = linearized_image(f, alpha);
      ASSERT_EQ(img.size(), f.size() / 2);
      std::set<Elem> s(img.begin(), img.end());
      for (Elem u : img) {
        for (Elem v : img) ASSERT_TRUE(s.count(u ^ v));
      }
    }
  }
}

TEST(KGamma, RejectsEachHypothesisSeparately) {
  const Field f = make_field(3);
  // alpha = 1: image {0,2,4,6}; Tr(beta) = 1 for beta in {1,3,5,7}.
  try {
    family_kgamma(f, 1, 1, 2);
    FAIL() << "expected gamma rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
  try {
    family_kgamma(f, 1, 2, 1);
    FAIL() << "expected trace rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("trace"), std::string::npos);
  }
  EXPECT_THROW(family_kgamma(f, 0, 1, 1), std::invalid_argument);
  EXPECT_THROW(family_kgamma(make_field(4), 1, 1, 1), std::invalid_argument);
  EXPECT_NO_THROW(family_kgamma(f, 1, 1, 1));
}

TEST(KGamma, EqualsLinearPartAfterCubic) {
  for (int n : {3, 5}) {
    const Field f = make_field(n);
    int instances = 0;
    for (Elem alpha = 1; alpha < f.size(); ++alpha) {
      const auto img = linearized_image(f, alpha);
      const auto h = family_paper_cubic(f, f.inv(alpha));
      for (Elem beta = 1; beta < f.size(); ++beta) {
        if (slow_trace(f, f.mul(beta, alpha)) != 1) continue;
        for (Elem gamma = 1; gamma < f.size(); ++gamma) {
          if (std::binary_search(img.begin(), img.end(), gamma)) continue;
          const auto l = kgamma_linear_part(f, alpha, beta, gamma);
          ASSERT_TRUE(is_linear(l));
          ASSERT_TRUE(is_permutation(l));
          ASSERT_EQ(l[alpha], gamma);
          ASSERT_EQ(family_kgamma(f, alpha, beta, gamma), compose(l, h));
          ++instances;
        }
      }
    }
    // (2^n - 1) alphas, 2^{n-1} betas, 2^{n-1} gammas each.
    EXPECT_EQ(instances, static_cast<int>((f.size() - 1) * (f.size() / 2) * (f.size() / 2)));
  }
}

TEST(Special, Gf8Table) {
  const Field f = make_field(3);
  const auto t = family_special(f);
  EXPECT_EQ(std::vector<Elem>(t.values().begin(), t.values().end()), (std::vector<Elem>{0, 0, 5, 3, 7, 5, 3, 7}));
  EXPECT_EQ(image_set(t), (std::vector<Elem>{0, 3, 5, 7}));
  EXPECT_EQ(t, family_x3x4(f));
  std::vector<Elem> trace_zero;
  for (Elem a = 0; a < 8; ++a) {
    if (slow_trace(f, slow_pow(f, a, 5)) == 0) trace_zero.push_back(a);
  }
  EXPECT_EQ(image_set(t), trace_zero);
}

TEST(Special, Guards) {
  EXPECT_THROW(family_special(make_field(4)), std::invalid_argument);
  EXPECT_EQ(special_index(make_field(13)), 7);
  EXPECT_THROW(family_x3x4(make_field(6)), std::invalid_argument);
}

TEST(NamedExponent, Values) {
  EXPECT_EQ(named_exponent(NamedExponent::Gold, 5, 1), 3u);
  EXPECT_EQ(named_exponent(NamedExponent::Kasami, 7, 2), 13u);
  EXPECT_EQ(named_exponent(NamedExponent::Welch, 5, 0), 7u);
  EXPECT_EQ(named_exponent(NamedExponent::Welch, 7, 0), 11u);
  EXPECT_THROW(named_exponent(NamedExponent::Gold, 6, 3), std::invalid_argument);
  EXPECT_THROW(named_exponent(NamedExponent::Gold, 5, 3), std::invalid_argument);
  EXPECT_THROW(named_exponent(NamedExponent::Gold, 5, 0), std::invalid_argument);
  EXPECT_THROW(named_exponent(NamedExponent::Welch, 6, 0), std::invalid_argument);
}

TEST(FamilyNames, RoundTrip) {
  for (const auto& [fam, name] : kFamilyNames) EXPECT_EQ(parse_family(name), fam);
  EXPECT_THROW(parse_family("nope"), std::invalid_argument);
}

TEST(BuildFamily, DispatchesAndRequiresParams) {
  const Field f = make_field(5);
  FamilyParams p;
  p.family = Family::Gold;
  p.i = 2;
  EXPECT_EQ(build_family(f, p), power_map(f, 5));
  p.family = Family::PaperLinear;
  EXPECT_THROW(build_family(f, p), std::invalid_argument);
  p.a = 3;
  EXPECT_EQ(build_family(f, p), family_paper_linear(f, 3));
  p.family = Family::Power;
  p.d = 9;
  EXPECT_EQ(build_family(f, p), power_map(f, 9));
}

TEST(Compose, IdentityAndMismatch) {
  const Field f = make_field(5);
  const auto t = family_paper_linear(f, 7);
  const auto id = ValueTable::identity(f);
  EXPECT_EQ(compose(t, id), t);
  EXPECT_EQ(compose(id, t), t);
  const auto sum = pointwise_add(t, t);
  for (Elem v : sum.values()) EXPECT_EQ(v, 0u);
  EXPECT_THROW(compose(t, ValueTable::identity(make_field(3))), std::invalid_argument);
  EXPECT_THROW(pointwise_add(t, ValueTable::identity(make_field(3))), std::invalid_argument);
}

TEST(IsLinear, ImpliesZeroAtZero) {
  const Field f = make_field(4);
  const auto translated = ValueTable::tabulate(f, [](Elem x) { return x ^ 1u; });
  EXPECT_FALSE(is_linear(translated));
  EXPECT_TRUE(is_permutation(translated));
  EXPECT_FALSE(is_permutation(family_paper_linear(make_field(5), 1)));
}

TEST(ValueTable, ValidatesAndSerializes) {
  const Field f = make_field(3);
  EXPECT_THROW(ValueTable(f, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(ValueTable(f, {0, 1, 2, 3, 4, 5, 6, 8}), std::invalid_argument);
  const auto t = family_special(f);
  const nlohmann::json j = t;
  EXPECT_EQ(j.dump(), R"({"n":3,"poly":11,"table":[0,0,5,3,7,5,3,7]})");
  EXPECT_EQ(value_table_from_json(j), t);
}

}  // namespace
}  // namespace rdsforge
