#include "rdsforge/bent.hpp"

#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "rdsforge/families.hpp"
#include "rdsforge/value_table.hpp"

namespace rdsforge {
namespace {

// Oracle: Walsh value by the defining sum.
std::int64_t walsh_sum(const TruthTable& f, std::uint32_t u) {
  std::int64_t s = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    const unsigned dot = static_cast<unsigned>(std::popcount(u & x)) & 1u;
    s += ((f[x] ^ dot) ? -1 : 1);
  }
  return s;
}

// Oracle: distance to every affine function, enumerated.
std::uint64_t affine_distance_bruteforce(const TruthTable& f) {
  std::uint64_t best = f.size();
  for (std::uint32_t u = 0; u < f.size(); ++u) {
    for (unsigned c = 0; c < 2; ++c) {
      std::uint64_t d = 0;
      for (std::uint32_t x = 0; x < f.size(); ++x) d += f[x] != ((static_cast<unsigned>(std::popcount(u & x)) & 1u) ^ c);
      best = std::min(best, d);
    }
  }
  return best;
}

QuadraticForm random_form(int m, std::mt19937_64& rng) {
  QuadraticForm q;
  q.m = m;
  for (int i = 0; i < m; ++i) q.coeffs.push_back(static_cast<std::uint32_t>(rng()) & ((1u << m) - 1));
  return q;
}

TruthTable tt(int m, std::vector<std::uint8_t> bits) { return TruthTable(m, std::move(bits)); }

TEST(BentFromApn, Gf8Example) {
  const Field f = make_field(3);
  const auto t = bent_from_apn(f, 1);
  EXPECT_EQ(t, tt(2, {0, 1, 1, 1}));
  EXPECT_EQ(anf(t), (std::vector<std::uint8_t>{0, 1, 1, 1}));  // x1 + x2 + x1 x2
  EXPECT_TRUE(is_bent(t));
  EXPECT_THROW(bent_from_apn(make_field(4), 1), std::invalid_argument);
  EXPECT_THROW(bent_from_apn(f, 0), std::invalid_argument);
}

TEST(BentFromApn, ZeroInputGivesZero) {
  for (int n : {5, 7}) {
    const Field f = make_field(n);
    for (Elem a = 1; a < f.size(); a += 3) EXPECT_EQ(bent_from_apn(f, a)[0], 0u);
  }
}

TEST(Walsh, Examples) {
  const auto zero = tt(3, std::vector<std::uint8_t>(8, 0));
  const auto w = walsh(zero);
  EXPECT_EQ(w.values[0], 8);
  for (std::size_t u = 1; u < 8; ++u) EXPECT_EQ(w.values[u], 0);
  EXPECT_EQ(walsh(tt(2, {0, 1, 1, 1})).values, (std::vector<std::int64_t>{-2, 2, 2, 2}));
  std::string why;
  EXPECT_FALSE(is_bent(zero, &why));
  EXPECT_FALSE(why.empty());
  EXPECT_FALSE(is_bent(tt(2, {0, 0, 0, 0})));
}

TEST(Walsh, MatchesDefinitionAndParseval) {
  std::mt19937_64 rng(17);
  for (int m = 0; m <= 8; ++m) {
    for (int t = 0; t < 5; ++t) {
      const auto f = TruthTable::tabulate(m, [&](std::uint32_t) { return static_cast<unsigned>(rng() & 1); });
      const auto w = walsh(f);
      std::int64_t energy = 0;
      for (std::uint32_t u = 0; u < f.size(); ++u) {
        ASSERT_EQ(w.values[u], walsh_sum(f, u));
        energy += w.values[u] * w.values[u];
      }
      ASSERT_EQ(energy, std::int64_t{1} << (2 * m));
    }
  }
}

TEST(DistanceToAffine, Examples) {
  EXPECT_EQ(distance_to_affine(tt(2, {0, 1, 1, 1})), 1u);
  EXPECT_EQ(distance_to_affine(tt(2, {0, 1, 1, 0})), 0u);
  QuadraticForm q{4, {0b0010, 0, 0b1000, 0}};  // x1 x2 + x3 x4
  const auto f = eval_quadratic(q);
  EXPECT_TRUE(is_bent(f));
  EXPECT_EQ(distance_to_affine(f), 6u);
}

TEST(DistanceToAffine, MatchesEnumeration) {
  std::mt19937_64 rng(23);
  for (int m = 1; m <= 6; ++m) {
    for (int t = 0; t < 6; ++t) {
      const auto f = TruthTable::tabulate(m, [&](std::uint32_t) { return static_cast<unsigned>(rng() & 1); });
      ASSERT_EQ(distance_to_affine(f), affine_distance_bruteforce(f));
    }
  }
}

TEST(QuadCoeffs, Gf8Example) {
  const auto q = quad_coeffs(make_field(3), 1);
  EXPECT_EQ(q.m, 2);
  EXPECT_EQ(q.coeff(0, 0), 1u);
  EXPECT_EQ(q.coeff(0, 1), 0u);
  EXPECT_EQ(q.coeff(1, 0), 1u);
  EXPECT_EQ(q.coeff(1, 1), 1u);
  EXPECT_EQ(eval_quadratic(q), tt(2, {0, 1, 1, 1}));
}

TEST(EvalQuadratic, Examples) {
  EXPECT_EQ(eval_quadratic(QuadraticForm{3, {0, 0, 0}}), tt(3, std::vector<std::uint8_t>(8, 0)));
  EXPECT_EQ(eval_quadratic(QuadraticForm{2, {0b10, 0}}), tt(2, {0, 0, 0, 1}));
}

TEST(QuadCoeffs, ReproducesBentFromApn) {
  for (int n : {3, 5, 7, 9}) {
    const Field f = make_field(n);
    const Elem step = n <= 7 ? 1 : 29;
    for (Elem a = 1; a < f.size(); a += step) {
      const auto fh = bent_from_apn(f, a);
      ASSERT_EQ(eval_quadratic(quad_coeffs(f, a)), fh) << "n=" << n << " a=" << a;
      ASSERT_TRUE(is_bent(fh));
      ASSERT_EQ(bilinear_rank(fh), n - 1);
    }
  }
}

TEST(BentFromApn, SourceMapInvariantUnderInverseShift) {
  // h(x) = x + a^{-1} Tr(a^3 x^3) satisfies h(x) = h(x + a^{-1}).
  for (int n : {3, 5, 7, 9, 11}) {
    const Field f = make_field(n);
    const Elem step = n <= 7 ? 1 : (f.size() / 9) + 1;
    for (Elem a = 1; a < f.size(); a += step) {
      const auto h = family_paper_linear(f, a);
      const Elem ai = f.inv(a);
      for (Elem x = 0; x < f.size(); ++x) ASSERT_EQ(h[x], h[x ^ ai]);
    }
  }
}

TEST(BilinearRank, Examples) {
  EXPECT_EQ(bilinear_rank(tt(2, {0, 0, 0, 1})), 2);
  EXPECT_EQ(bilinear_rank(tt(2, {0, 1, 1, 1})), 2);
  EXPECT_EQ(bilinear_rank(tt(2, {0, 1, 1, 0})), 0);
  // x1 x2 x3 has degree 3
  EXPECT_THROW(bilinear_rank(tt(3, {0, 0, 0, 0, 0, 0, 0, 1})), std::invalid_argument);
}

TEST(BilinearRank, QuadraticBentIffFullRank) {
  std::mt19937_64 rng(31);
  for (int m : {2, 4, 6, 8}) {
    for (int t = 0; t < 60; ++t) {
      const auto f = eval_quadratic(random_form(m, rng));
      ASSERT_LE(algebraic_degree(f), 2);
      ASSERT_EQ(is_bent(f), bilinear_rank(f) == m);
    }
  }
}

TEST(GraphRds, Examples) {
  const auto r = graph_rds_check(tt(2, {0, 1, 1, 1}));
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.params, (RdsParams{4, 2, 4, 2}));
  EXPECT_EQ(r.forbidden, (std::vector<Elem>{0, 1}));
  EXPECT_FALSE(graph_rds_check(tt(2, {0, 1, 1, 0})).verdict);
  EXPECT_FALSE(derivative_balance(tt(2, {0, 1, 1, 0})));
}

TEST(GraphRds, ThreeWayAgreement) {
  std::mt19937_64 rng(41);
  for (int m : {2, 4, 6, 8, 10}) {
    for (int t = 0; t < 40; ++t) {
      // Alternate quadratic samples with fully random tables.
      const auto f = (t % 2 == 0)
                         ? eval_quadratic(random_form(m, rng))
                         : TruthTable::tabulate(m, [&](std::uint32_t) { return static_cast<unsigned>(rng() & 1); });
      const bool bent = is_bent(f);
      ASSERT_EQ(derivative_balance(f), bent);
      ASSERT_EQ(graph_rds_check(f).verdict, bent);
    }
  }
}

TEST(GraphFunctionFromImage, MatchesBentFromApn) {
  for (int n : {3, 5, 7}) {
    const Field f = make_field(n);
    for (Elem a = 1; a < f.size(); ++a) {
      const auto img = image_set(family_paper_cubic(f, a));
      const auto g = graph_function_from_image(f, img, f.inv(a));
      const auto fh = bent_from_apn(f, a);
      ASSERT_EQ(g, fh) << "n=" << n << " a=" << a;
    }
  }
  const Field f = make_field(3);
  const std::vector<Elem> not_transversal{0, 1};
  EXPECT_THROW(graph_function_from_image(f, not_transversal, 1), std::invalid_argument);
}

TEST(BentSummary, CarriedOnlyForTransversals) {
  const Field f = make_field(5);
  const auto img = image_set(family_special(f));
  const auto s = bent_summary_from_image(f, img, detect_forbidden(img, 5));
  EXPECT_TRUE(s.carried);
  EXPECT_TRUE(s.function.has_value());
  const auto bad = image_set(family_x3x4(make_field(7)));
  const auto s2 = bent_summary_from_image(make_field(7), bad, detect_forbidden(bad, 7));
  EXPECT_FALSE(s2.carried);
  EXPECT_FALSE(s2.is_bent);
}

TEST(TruthTableJson, RoundTrip) {
  const auto t = tt(2, {0, 1, 1, 1});
  const nlohmann::json j = t;
  EXPECT_EQ(j.dump(), R"({"bits":[0,1,1,1],"m":2})");
  EXPECT_EQ(truth_table_from_json(j), t);
  EXPECT_THROW(tt(2, {0, 1, 2, 1}), std::invalid_argument);
  EXPECT_THROW(tt(2, {0, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace rdsforge
