#include <qs/cosets.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace qs;

namespace {

bool contains_minus_one(const std::vector<QuaternionElement>& s) {
  return std::find(s.begin(), s.end(), -MaximalOrder::one()) != s.end();
}

}  // namespace

TEST(DoubleCosets, OrbitStabilizer) {
  for (unsigned p : {3u, 5u, 7u, 13u}) {
    const auto cd = double_cosets(split_at_p(p, 12));
    EXPECT_EQ(std::accumulate(cd.orbit_size.begin(), cd.orbit_size.end(), 0), static_cast<int>(p) + 1);
    for (int i = 0; i < cd.size(); ++i) {
      EXPECT_EQ(cd.orbit_size[static_cast<std::size_t>(i)] * static_cast<int>(cd.stabilizer[static_cast<std::size_t>(i)].size()), 24);
      EXPECT_TRUE(contains_minus_one(cd.stabilizer[static_cast<std::size_t>(i)]));
      for (const auto& h : cd.stabilizer_local[static_cast<std::size_t>(i)]) EXPECT_TRUE(h.in_iwahori());
    }
  }
}

TEST(DoubleCosets, SmallPrimes) {
  const auto cd3 = double_cosets(split_at_p(3, 12));
  EXPECT_EQ(cd3.size(), 1);
  EXPECT_EQ(cd3.stabilizer[0].size(), 6u);
  const auto cd13 = double_cosets(split_at_p(13, 8));
  EXPECT_GE(cd13.size(), 2);
}

TEST(DoubleCosets, IndependentOfSplitting) {
  for (unsigned p : {5u, 7u, 13u}) {
    const auto a = double_cosets(split_at_p(p, 10, 0), 0);
    const auto b = double_cosets(split_at_p(p, 10, 1), 1);
    auto sa = a.orbit_size, sb = b.orbit_size;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    EXPECT_EQ(sa, sb);
  }
}

TEST(HeckeCosets, Counts) {
  const auto S = split_at_p(3, 12);
  const auto up = hecke_cosets(HeckeOp::Up, 3, S);
  EXPECT_EQ(up.count(), 3);
  EXPECT_EQ(hecke_cosets(HeckeOp::Tl, 5, S).count(), 6);
  EXPECT_EQ(hecke_cosets(HeckeOp::Tl, 7, S).count(), 8);
  EXPECT_EQ(hecke_cosets(HeckeOp::Sl, 5, S).count(), 1);
  EXPECT_THROW(hecke_cosets(HeckeOp::Tl, 3, S), std::invalid_argument);
  EXPECT_THROW(hecke_cosets(HeckeOp::Up, 5, S), std::invalid_argument);
}

TEST(HeckeTable, UpWitnesses) {
  for (unsigned p : {3u, 5u, 7u}) {
    const auto cd = double_cosets(split_at_p(p, 12));
    const auto t = hecke_table(cd, HeckeOp::Up, p);
    EXPECT_EQ(t.cosets(), static_cast<int>(p));
    for (int i = 0; i < cd.size(); ++i)
      for (int b = 0; b < static_cast<int>(p); ++b) {
        const auto bm = brandt_match(t, cd, i, b);
        EXPECT_TRUE(bm.kappa_local.in_iwahori());
        EXPECT_EQ(bm.gamma.norm(), static_cast<long>(p));
      }
  }
}

TEST(HeckeTable, TlMassCheck) {
  // On trivial coefficients the averaged T_l matrix has row sums l + 1.
  for (unsigned p : {3u, 5u, 13u})
    for (long l : {5L, 7L, 11L}) {
      if (l == static_cast<long>(p)) continue;
      const auto cd = double_cosets(split_at_p(p, 10));
      const auto t = hecke_table(cd, HeckeOp::Tl, l);
      for (int i = 0; i < cd.size(); ++i) {
        int total = 0;
        for (const auto& ws : t.witnesses[static_cast<std::size_t>(i)]) {
          ++total;
          EXPECT_EQ(ws.front().gamma.norm(), l);
        }
        EXPECT_EQ(total, l + 1);
      }
      // Column mass: sum_i sum_c [j(i,c) = j] / |Gamma_i| = (l+1) / |Gamma_j|.
      std::vector<double> mass(static_cast<std::size_t>(cd.size()), 0.0);
      for (int i = 0; i < cd.size(); ++i)
        for (const auto& ws : t.witnesses[static_cast<std::size_t>(i)])
          mass[static_cast<std::size_t>(ws.front().j)] += 1.0 / static_cast<double>(cd.stabilizer[static_cast<std::size_t>(i)].size());
      for (int j = 0; j < cd.size(); ++j)
        EXPECT_NEAR(mass[static_cast<std::size_t>(j)], static_cast<double>(l + 1) / static_cast<double>(cd.stabilizer[static_cast<std::size_t>(j)].size()), 1e-9);
    }
}

TEST(HeckeTable, SlIsCentral) {
  const auto cd = double_cosets(split_at_p(5, 10));
  const auto t = hecke_table(cd, HeckeOp::Sl, 7);
  for (int i = 0; i < cd.size(); ++i) {
    const auto bm = brandt_match(t, cd, i, 0);
    EXPECT_EQ(bm.j, i);
    EXPECT_EQ(bm.gamma.norm(), 49);
  }
}

TEST(HeckeTable, SeededOrderKeepsTheMatchTable) {
  const auto cd = double_cosets(split_at_p(5, 10));
  const auto a = hecke_table(cd, HeckeOp::Up, 5);
  const auto b = hecke_table(cd, HeckeOp::Up, 5, 1234);
  for (int i = 0; i < cd.size(); ++i)
    for (int c = 0; c < a.cosets(); ++c) EXPECT_EQ(brandt_match(a, cd, i, c).j, brandt_match(b, cd, i, c).j);
}

TEST(HeckeTable, TrivialCoset) {
  // S_1-like check through the stabilizers: the identity matches itself.
  const auto cd = double_cosets(split_at_p(3, 10));
  EXPECT_TRUE(agree(cd.lift_inv[0] * cd.splitting().image(MaximalOrder::one()) * cd.lift[0], Mat2::identity(3, 10), 10));
}
