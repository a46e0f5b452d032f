#include <qs/weight.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qs;

namespace {

Padic P(long n, unsigned p = 3, int cap = 40) { return Padic(p, cap, n); }

Padic random_unit(std::mt19937_64& rng, unsigned p, int cap) {
  std::uniform_int_distribution<long> d(1, 1000000);
  long x;
  do x = d(rng);
  while (x % static_cast<long>(p) == 0);
  return P(x, p, cap);
}

}  // namespace

TEST(Teichmuller, Examples) {
  EXPECT_EQ(teichmuller(P(1)), P(1));
  EXPECT_TRUE(agree(teichmuller(P(-1)), P(-1), 40));
  const Padic w = teichmuller(Padic::from_residue(5, 2, 2));
  EXPECT_EQ(w.residue(2), 7);
  EXPECT_THROW(teichmuller(P(3)), std::invalid_argument);
}

TEST(Teichmuller, RootOfUnity) {
  std::mt19937_64 rng(1);
  for (unsigned p : {3u, 5u, 7u, 13u})
    for (int t = 0; t < 20; ++t) {
      const Padic u = random_unit(rng, p, 30);
      const Padic w = teichmuller(u);
      EXPECT_TRUE(agree(w.pow(p - 1), P(1, p, 30), 30));
      EXPECT_EQ(w.residue(1), u.residue(1));
    }
}

TEST(Log, Homomorphism) {
  const Padic a = P(4), b = P(10);
  EXPECT_TRUE(agree(padic_log(a * b), padic_log(a) + padic_log(b), 38));
  EXPECT_THROW(padic_log(P(2)), std::invalid_argument);
}

TEST(Character, IntegralExamples) {
  EXPECT_EQ(eval_integral(WeightCharacter::integral(3, 40, 2), P(5)), P(1));
  EXPECT_TRUE(agree(eval_integral(WeightCharacter::integral(3, 40, 4), P(2)), P(4), 40));
  EXPECT_EQ(epsilon_exponent(WeightCharacter::integral(5, 20, 7)), 1);
}

TEST(Character, FamilyAtOnePlusP) {
  const auto w = WeightCharacter::family(3, 40, 2, 1, 3);
  const FamilyCoefficient k = eval_family(w, P(4));
  EXPECT_TRUE(agree(k[0], P(1), 38));
  EXPECT_TRUE(agree(k[1], P(3), 38));
  EXPECT_TRUE(k[2].is_zero());
}

TEST(Character, FamilyMultiplicative) {
  std::mt19937_64 rng(2);
  const auto w = WeightCharacter::family(3, 40, 4, 2, 6);
  for (int t = 0; t < 100; ++t) {
    const Padic u = random_unit(rng, 3, 40), v = random_unit(rng, 3, 40);
    const auto lhs = eval_family(w, u) * eval_family(w, v);
    const auto rhs = eval_family(w, u * v);
    for (int n = 0; n < 6; ++n) EXPECT_TRUE(agree(lhs[n], rhs[n], 34)) << t << " " << n;
  }
}

TEST(Character, FamilyCentreIsIntegralWeight) {
  std::mt19937_64 rng(3);
  const auto w = WeightCharacter::family(5, 30, 6, 1, 4);
  const auto w0 = WeightCharacter::integral(5, 30, 6);
  for (int t = 0; t < 20; ++t) {
    const Padic u = random_unit(rng, 5, 30);
    EXPECT_TRUE(agree(eval_family(w, u)[0], eval_integral(w0, u), 28));
  }
}

TEST(Character, SpecializationRecoversIntegralWeight) {
  std::mt19937_64 rng(4);
  const auto fam = WeightCharacter::family(3, 40, 4, 5, 8);
  const Padic s = fam.coordinate_of(490);
  EXPECT_EQ(s.valuation(), 1);
  for (int t = 0; t < 20; ++t) {
    const Padic u = random_unit(rng, 3, 40);
    EXPECT_TRUE(agree(eval_family(fam, u).specialize(s), u.pow(488), 36));
  }
  EXPECT_THROW(fam.coordinate_of(5), std::invalid_argument);
  EXPECT_THROW(fam.coordinate_of(10), std::invalid_argument);
}

TEST(Character, IntegralWeightsAccumulate) {
  const int N = 12;
  const long shift = 2 * 59049;  // (p-1) p^{N-2}
  const auto a = WeightCharacter::integral(3, N, 4);
  const auto b = WeightCharacter::integral(3, N, static_cast<int>(4 + shift));
  for (long x = 1; x < 60; x += 3) {
    const Padic u = Padic(3, N, x).with_absprec(N);
    EXPECT_TRUE(agree(eval_integral(a, u), eval_integral(b, u), N - 1));
  }
}

TEST(CharacterSeries, IntegralExamples) {
  const Padic one = P(1), p = P(3);
  const auto s2 = character_series(WeightCharacter::integral(3, 40, 2), one, p, 4);
  EXPECT_EQ(s2[0], P(1));
  for (int j = 1; j <= 4; ++j) EXPECT_TRUE(s2[j].is_zero());
  const auto s3 = character_series(WeightCharacter::integral(3, 40, 3), one, p, 2);
  EXPECT_TRUE(agree(s3[1], p, 40));
  EXPECT_TRUE(s3[2].is_zero());
  const auto s4 = character_series(WeightCharacter::integral(3, 40, 4), one, p, 3);
  EXPECT_TRUE(agree(s4[1], P(6), 40));
  EXPECT_TRUE(agree(s4[2], P(9), 40));
  EXPECT_TRUE(s4[3].is_zero());
}

TEST(CharacterSeries, NegativeWeightNeedsSmallDisc) {
  const auto w = WeightCharacter::integral(3, 30, 0);
  EXPECT_THROW(character_series(w, P(1), P(1).shifted(-1), 5), AnalyticityError);
  EXPECT_NO_THROW(character_series(w, P(1), P(3), 5));
}

TEST(CharacterSeries, SpecializationSquare) {
  const auto fam = WeightCharacter::family(3, 40, 4, 5, 8);
  const Padic s = fam.coordinate_of(490);
  const auto w = WeightCharacter::integral(3, 40, 490);
  const Padic d = P(5), beta = P(6);
  const auto lhs = specialize(character_series_family(fam, d, beta, 10), s);
  const auto rhs = character_series(w, d, beta, 10);
  for (int j = 0; j <= 10; ++j) EXPECT_TRUE(agree(lhs[j], rhs[j], 34)) << j;
}
