#include <gtest/gtest.h>

#include "cdiff/affine.hpp"
#include "oracles.hpp"

using namespace cdiff;

namespace {

FunctionTable random_table(const FieldPtr& field, Rng& rng) {
  std::vector<Elem> v(field->order());
  for (auto& y : v) y = static_cast<Elem>(rng.below(field->order()));
  return FunctionTable(field, std::move(v));
}

// L(x) from the coordinate matrix, mod p.
Elem apply_matrix(const Field& F, const std::vector<std::vector<std::uint64_t>>& m, Elem x) {
  const auto d = F.digits(x);
  std::vector<std::uint32_t> out(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < d.size(); ++j) acc += m[i][j] * d[j];
    out[i] = static_cast<std::uint32_t>(acc % F.characteristic());
  }
  return F.from_digits(out);
}

}  // namespace

TEST(AffineMap, Construction) {
  auto F = make_field(2, 4);
  EXPECT_THROW(AffineMap(F, {1, 0, 0}), DomainError);
  EXPECT_THROW(AffineMap(F, {1, 0, 0, 16}), DomainError);
  const auto id = AffineMap::identity(F);
  for (Elem x = 0; x < 16; ++x) EXPECT_EQ(id(x), x);
  const auto t = AffineMap::translation(F, 5);
  for (Elem x = 0; x < 16; ++x) EXPECT_EQ(t(x), F->add(x, 5));
}

TEST(AffineMap, MatrixFormAgreesExhaustively) {
  Rng rng(1);
  for (auto [p, n] : {std::pair{2u, 4u}, {3u, 3u}, {2u, 8u}, {5u, 2u}}) {
    auto F = make_field(p, n);
    for (int i = 0; i < 5; ++i) {
      const AffineMap A = random_affine(F, rng);
      const auto m = A.matrix();
      for (Elem x = 0; x < F->order(); ++x) ASSERT_EQ(A.linear(x), apply_matrix(*F, m, x));
    }
  }
}

TEST(AffineMap, Rank) {
  auto F = make_field(2, 5);
  EXPECT_TRUE(AffineMap(F, {0, 1, 0, 0, 0}).invertible());
  // x^2 + x kills F_2.
  const AffineMap artin(F, {1, 1, 0, 0, 0});
  EXPECT_EQ(artin.rank(), 4u);
  EXPECT_FALSE(artin.invertible());
  EXPECT_FALSE(artin.table().is_permutation());
  EXPECT_EQ(AffineMap(F, {0, 0, 0, 0, 0}).rank(), 0u);

  Rng rng(2);
  auto G = make_field(3, 2);
  for (int i = 0; i < 50; ++i) {
    const AffineMap A(G, {static_cast<Elem>(rng.below(9)), static_cast<Elem>(rng.below(9))});
    EXPECT_EQ(A.invertible(), A.table().is_permutation());
  }
}

TEST(AffineMap, Inverse) {
  Rng rng(3);
  for (auto [p, n] : {std::pair{2u, 4u}, {2u, 6u}, {3u, 3u}, {7u, 2u}}) {
    auto F = make_field(p, n);
    for (int i = 0; i < 10; ++i) {
      const AffineMap A = random_affine(F, rng);
      const AffineMap B = A.inverse();
      for (Elem x = 0; x < F->order(); ++x) {
        ASSERT_EQ(B(A(x)), x);
        ASSERT_EQ(A(B(x)), x);
      }
      EXPECT_EQ(B.table(), A.table().inverse());
    }
  }
  auto F = make_field(2, 5);
  EXPECT_THROW(AffineMap(F, {1, 1, 0, 0, 0}).inverse(), DomainError);
}

TEST(AffineMap, TextRoundTrip) {
  auto F = make_field(2, 4);
  const AffineMap A(F, {3, 0, 7, 1}, 9);
  EXPECT_EQ(A.to_string(), "L=[3,0,7,1] s=9");
  EXPECT_EQ(parse_affine(F, A.to_string()), A);
  EXPECT_THROW(parse_affine(F, "L=3 s=1"), ParseError);
  EXPECT_THROW(parse_affine(F, "L=[1,x,0,0] s=1"), ParseError);
}

TEST(AffineMap, SeededSamplingIsDeterministic) {
  auto F = make_field(2, 8);
  EXPECT_EQ(random_affine(F, std::uint64_t{42}), random_affine(F, std::uint64_t{42}));
  EXPECT_NE(random_affine(F, std::uint64_t{42}), random_affine(F, std::uint64_t{43}));
}

TEST(CommutesWithScalar, Examples) {
  auto F = make_field(2, 4);
  const AffineMap frob(F, {0, 1, 0, 0});
  EXPECT_TRUE(commutes_with_scalar(frob, 1));
  Elem deg4 = 0;
  for (Elem c = 2; c < 16 && !deg4; ++c)
    if (F->subfield_degree(c) == 4) deg4 = c;
  ASSERT_NE(deg4, 0u);
  EXPECT_FALSE(commutes_with_scalar(frob, deg4));
  Elem deg2 = 0;
  for (Elem c = 2; c < 16 && !deg2; ++c)
    if (F->subfield_degree(c) == 2) deg2 = c;
  ASSERT_NE(deg2, 0u);
  EXPECT_TRUE(commutes_with_scalar(AffineMap(F, {0, 0, 1, 0}), deg2));
}

TEST(CommutesWithScalar, MatchesExhaustiveCheck) {
  Rng rng(4);
  for (auto [p, n] : {std::pair{2u, 4u}, {2u, 6u}, {3u, 2u}, {2u, 8u}}) {
    auto F = make_field(p, n);
    int agree_true = 0;
    for (int i = 0; i < 12; ++i) {
      // Mix generic maps with maps supported on a random divisor's multiples.
      std::uint32_t l = 1;
      for (std::uint32_t cand = 1 + static_cast<std::uint32_t>(rng.below(n)); cand <= n; ++cand)
        if (n % cand == 0) {
          l = cand;
          break;
        }
      const AffineMap A = i % 2 ? random_affine(F, rng) : random_affine_over_subfield(F, l, rng);
      for (Elem c = 0; c < F->order(); c += (F->order() > 64 ? 7 : 1)) {
        bool truth = true;
        for (Elem x = 0; x < F->order() && truth; ++x)
          truth = A.linear(F->mul(c, x)) == F->mul(c, A.linear(x));
        ASSERT_EQ(commutes_with_scalar(A, c), truth) << A.to_string() << " c=" << c;
        agree_true += truth;
      }
    }
    EXPECT_GT(agree_true, 0);
  }
}

TEST(Compose, Basics) {
  auto F = make_field(2, 6);
  Rng rng(5);
  const AffineMap A = random_affine(F, rng);
  EXPECT_EQ(compose_tables(FunctionTable::identity(F), A, Side::input), A.table());
  EXPECT_EQ(compose_tables(FunctionTable::identity(F), A, Side::output), A.table());
  const FunctionTable T = random_table(F, rng);
  EXPECT_EQ(compose_tables(compose_tables(T, A, Side::input), A.inverse(), Side::input), T);
  EXPECT_EQ(compose_tables(compose_tables(T, A, Side::output), A.inverse(), Side::output), T);
  EXPECT_THROW(compose_tables(T, random_affine(make_field(2, 5), rng), Side::input), FieldMismatch);
}

TEST(InputInvariance, TrivialMaps) {
  auto F = make_field(2, 4);
  Rng rng(6);
  const FunctionTable T = random_table(F, rng);
  for (Elem c = 0; c < 16; ++c) {
    EXPECT_TRUE(verify_input_invariance(T, AffineMap::identity(F), c).holds);
    const auto r = verify_input_invariance(T, AffineMap::translation(F, 11), c);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.literal_holds);
  }
}

TEST(InputInvariance, RandomTriples) {
  Rng rng(7);
  int literal_failures = 0;
  for (auto [p, n] : {std::pair{2u, 4u}, {3u, 2u}, {2u, 6u}}) {
    auto F = make_field(p, n);
    for (int i = 0; i < 20; ++i) {
      const FunctionTable T = random_table(F, rng);
      const AffineMap A = random_affine(F, rng);
      const Elem c = static_cast<Elem>(rng.below(F->order()));
      const auto r = verify_input_invariance(T, A, c);
      EXPECT_TRUE(r.holds);
      EXPECT_EQ(r.delta_F, r.delta_FA);
      literal_failures += !r.literal_holds;
    }
  }
  // The index placement L(a) on the composed side is not an identity for
  // non-involutive L.
  EXPECT_GT(literal_failures, 0);
}

TEST(InputInvariance, AgainstDefinition) {
  auto F = make_field(2, 4);
  Rng rng(8);
  const FunctionTable T = random_table(F, rng);
  const AffineMap A = random_affine(F, rng);
  const FunctionTable TA = compose_tables(T, A, Side::input);
  std::vector<Elem> vt(T.values().begin(), T.values().end()), vta(TA.values().begin(), TA.values().end());
  for (Elem c : {Elem{0}, Elem{1}, Elem{6}})
    for (Elem a = 0; a < 16; ++a)
      for (Elem b = 0; b < 16; ++b)
        EXPECT_EQ(oracle::c_ddt_entry(*F, vta, a, b, c), oracle::c_ddt_entry(*F, vt, A.linear(a), b, c));
}

TEST(OutputInvariance, PrimeFieldScalar) {
  Rng rng(9);
  for (auto [p, n] : {std::pair{2u, 4u}, {3u, 2u}}) {
    auto F = make_field(p, n);
    for (int i = 0; i < 10; ++i) {
      const FunctionTable T = random_table(F, rng);
      const AffineMap A = random_affine(F, rng);
      const Elem c = static_cast<Elem>(rng.below(p));
      const auto r = verify_output_invariance(T, A, c);
      EXPECT_TRUE(r.commutes);
      EXPECT_TRUE(r.column_bijection_holds);
      EXPECT_TRUE(r.delta_equal);
    }
  }
}

TEST(OutputInvariance, SubfieldLinearMaps) {
  auto F = make_field(2, 4);
  Rng rng(10);
  std::vector<Elem> deg2;
  for (Elem c = 2; c < 16; ++c)
    if (F->subfield_degree(c) == 2) deg2.push_back(c);
  ASSERT_EQ(deg2.size(), 2u);
  for (int i = 0; i < 20; ++i) {
    const FunctionTable T = random_table(F, rng);
    const AffineMap A = random_affine_over_subfield(F, 2, rng);
    const Elem c = deg2[i % 2];
    const auto r = verify_output_invariance(T, A, c);
    EXPECT_TRUE(r.commutes);
    EXPECT_TRUE(r.column_bijection_holds);
    EXPECT_TRUE(r.delta_equal);
    // The column map b -> L(b) + (1 - c)s is a permutation.
    std::vector<bool> seen(16, false);
    for (Elem b = 0; b < 16; ++b) seen[F->add(A.linear(b), F->mul(F->sub(1, c), A.constant()))] = true;
    EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 16);
  }
}

TEST(OutputInvariance, NonCommutingBreaksColumnBijection) {
  auto F = make_field(2, 4);
  Rng rng(11);
  int broken = 0, total = 0;
  for (int i = 0; i < 30; ++i) {
    const FunctionTable T = random_table(F, rng);
    const AffineMap A = random_affine(F, rng);
    const Elem c = static_cast<Elem>(2 + rng.below(14));
    const auto r = verify_output_invariance(T, A, c);
    if (r.commutes) continue;
    ++total;
    broken += !r.column_bijection_holds;
    if (!r.column_bijection_holds) EXPECT_TRUE(r.first_mismatch.has_value());
  }
  EXPECT_GT(total, 0);
  EXPECT_EQ(broken, total);
}

TEST(OutputInvariance, CounterexampleSearch) {
  auto F = make_field(2, 4);
  const auto s = search_output_counterexample(F, 500, 2024, 4);
  EXPECT_EQ(s.trials, 500u);
  ASSERT_TRUE(s.witness.has_value());
  const auto& w = *s.witness;
  EXPECT_NE(w.delta_F, w.delta_AF);
  EXPECT_GE(w.c, 2u);
  EXPECT_NE(w.A.coeffs()[1], 0u);
  EXPECT_EQ(c_uniformity(w.F, w.c), w.delta_F);
  EXPECT_EQ(c_uniformity(compose_tables(w.F, w.A, Side::output), w.c), w.delta_AF);
  const auto again = search_output_counterexample(F, 500, 2024, 1);
  EXPECT_EQ(again.hits, s.hits);
  EXPECT_EQ(again.witness->trial, w.trial);
}
