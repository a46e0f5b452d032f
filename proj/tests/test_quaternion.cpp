#include <qs/quaternion.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace qs;

namespace {

QuaternionElement random_order_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-20, 20);
  const long par = d(rng) & 1;
  auto c = [&] { return 2 * d(rng) + par; };
  return QuaternionElement::doubled(c(), c(), c(), c());
}

long brute_force_count(long n) {
  long count = 0;
  for (long A = -10; A <= 10; ++A)
    for (long B = -10; B <= 10; ++B)
      for (long C = -10; C <= 10; ++C)
        for (long D = -10; D <= 10; ++D) {
          const long par = A & 1;
          if ((B & 1) != par || (C & 1) != par || (D & 1) != par) continue;
          if (A * A + B * B + C * C + D * D == 4 * n) ++count;
        }
  return count;
}

}  // namespace

TEST(Quaternion, NormMultiplicative) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_order_element(rng), y = random_order_element(rng);
    const auto xy = x * y;
    EXPECT_TRUE(xy.in_order());
    EXPECT_EQ(xy.norm(), x.norm() * y.norm());
    // x^2 - trd(x) x + nrd(x) = 0
    const auto lhs = x * x + (-x.trace()) * x + x.norm() * MaximalOrder::one();
    EXPECT_EQ(lhs, QuaternionElement::doubled(0, 0, 0, 0));
  }
}

TEST(Quaternion, StructureConstants) {
  using O = MaximalOrder;
  EXPECT_EQ(O::i() * O::i(), -O::one());
  EXPECT_EQ(O::j() * O::j(), -O::one());
  EXPECT_EQ(O::i() * O::j(), O::k());
  EXPECT_EQ(O::j() * O::i(), -O::k());
  for (const auto& a : O::basis())
    for (const auto& b : O::basis()) EXPECT_TRUE((a * b).in_order());
}

TEST(Quaternion, UnitGroup) {
  const auto& u = unit_group();
  EXPECT_EQ(u.size(), 24u);
  for (const auto& a : u)
    for (const auto& b : u) EXPECT_NE(std::find(u.begin(), u.end(), a * b), u.end());
  EXPECT_NE(std::find(u.begin(), u.end(), -MaximalOrder::one()), u.end());
  EXPECT_NE(std::find(u.begin(), u.end(), QuaternionElement::doubled(1, -1, 1, -1)), u.end());
  EXPECT_NE(std::find(u.begin(), u.end(), MaximalOrder::k()), u.end());
}

TEST(Quaternion, EnumerationMatchesBruteForce) {
  for (long n : {1L, 2L, 3L, 5L, 7L, 11L, 13L}) EXPECT_EQ(static_cast<long>(enumerate_by_norm(n).size()), brute_force_count(n)) << n;
  // Hurwitz counts 24 * sigma(n) for odd n.
  EXPECT_EQ(enumerate_by_norm(3).size(), 96u);
  EXPECT_EQ(enumerate_by_norm(5).size(), 144u);
}

TEST(Splitting, Homomorphism) {
  for (unsigned p : {3u, 5u, 7u, 13u})
    for (int choice : {0, 1}) {
      const auto S = split_at_p(p, 30, choice);
      EXPECT_TRUE(agree(S.r() * S.r() + S.t() * S.t(), Padic(p, 30, -1), 30));
      const auto basis = MaximalOrder::basis();
      for (const auto& a : basis)
        for (const auto& b : basis) EXPECT_TRUE(agree(S.image(a * b), S.image(a) * S.image(b), 30));
      EXPECT_TRUE(agree(S.image(MaximalOrder::k()), S.image(MaximalOrder::i()) * S.image(MaximalOrder::j()), 30));
      EXPECT_TRUE(agree(S.image(MaximalOrder::one() + MaximalOrder::i()).det(), Padic(p, 30, 2), 30));
    }
}

TEST(Splitting, DeterminantAndTrace) {
  std::mt19937_64 rng(10);
  const auto S = split_at_p(5, 25);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_order_element(rng);
    const Mat2 m = S.image(x);
    EXPECT_TRUE(agree(m.det(), Padic(5, 25, x.norm()), 25));
    EXPECT_TRUE(agree(m.trace(), Padic(5, 25, x.trace()), 25));
  }
}

TEST(Splitting, SmallestPrime) {
  const auto S = split_at_p(3, 10);
  EXPECT_EQ(S.r().residue(1), 1);
  EXPECT_EQ(S.t().residue(1), 1);
  EXPECT_THROW(split_at_p(2, 10), std::invalid_argument);
}
