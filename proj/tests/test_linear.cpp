#include <qs/matrix.hpp>
#include <qs/newton.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qs;

namespace {

Padic P(long n, int cap = 40) { return Padic(3, cap, n); }

PadicMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-50, 50);
  PadicMatrix A = PadicMatrix::zero(n, n, P(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = P(d(rng));
  return A;
}

Polynomial poly(std::initializer_list<long> c) {
  Polynomial r;
  for (long x : c) r.push_back(P(x));
  return r;
}

}  // namespace

TEST(CharSeries, TwoByTwo) {
  PadicMatrix A = PadicMatrix::zero(2, 2, P(0));
  A(0, 0) = P(2); A(0, 1) = P(5); A(1, 0) = P(-1); A(1, 1) = P(7);
  const auto c = char_series_berkowitz(A);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(agree(c[1], P(-9), 35));
  EXPECT_TRUE(agree(c[2], P(19), 35));
}

TEST(CharSeries, BerkowitzMatchesHessenberg) {
  std::mt19937_64 rng(11);
  for (int n : {1, 3, 6, 10}) {
    const PadicMatrix A = random_matrix(n, rng);
    const auto b = char_series_berkowitz(A);
    const auto h = char_series_hessenberg(A);
    ASSERT_EQ(b.size(), h.size());
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_TRUE(agree(b[i], h[i], 30)) << n << " " << i;
  }
}

TEST(CharSeries, SimilarityInvariant) {
  std::mt19937_64 rng(5);
  const PadicMatrix A = random_matrix(5, rng);
  PadicMatrix T = PadicMatrix::identity(5, P(0));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) T(i, j) = P(static_cast<long>(i + 2 * j));
  // T is unipotent, so its inverse is integral; build it by back substitution.
  PadicMatrix Ti = PadicMatrix::identity(5, P(0));
  for (int c = 0; c < 5; ++c)
    for (int r = 4; r >= 0; --r) {
      Padic acc = Ti(r, c);
      for (int k = r + 1; k < 5; ++k) acc -= T(r, k) * Ti(k, c);
      Ti(r, c) = acc;
    }
  const auto a = char_series_hessenberg(A);
  const auto b = char_series_hessenberg(Ti * A * T);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(agree(a[i], b[i], 30));
}

TEST(Kernel, SaturatedBasis) {
  // Rows (3, 6, 0) and (0, 0, 9): kernel spanned by (2, -1, 0), saturated.
  PadicMatrix A = PadicMatrix::zero(2, 3, P(0));
  A(0, 0) = P(3); A(0, 1) = P(6); A(1, 2) = P(9);
  const auto K = kernel(A);
  ASSERT_EQ(K.dim(), 1);
  int minv = K.basis.min_valuation();
  EXPECT_EQ(minv, 0);
  const auto Av = A * K.basis;
  for (int i = 0; i < 2; ++i) EXPECT_TRUE(Av(i, 0).is_zero());
  EXPECT_TRUE(K.basis(K.pivots[0], 0) == P(1));
}

TEST(Kernel, RandomRankDeficient) {
  std::mt19937_64 rng(3);
  const PadicMatrix B = random_matrix(6, rng);
  PadicMatrix L = PadicMatrix::zero(6, 4, P(0));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) L(i, j) = B(i, j);
  const PadicMatrix A = L * L.transpose();  // rank 4
  const auto K = kernel(A, 25);
  EXPECT_EQ(K.dim(), 2);
  const auto Z = A * K.basis;
  EXPECT_GE(Z.min_valuation(), 20);
  for (int c = 0; c < K.dim(); ++c)
    for (int r = 0; r < K.dim(); ++r) EXPECT_TRUE(agree(K.basis(K.pivots[r], c), P(r == c ? 1 : 0), 30));
}

TEST(Newton, TwoSlopes) {
  const auto np = newton_polygon(poly({1, -4, 3}));
  const auto s = np.slopes();
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 0);
  EXPECT_EQ(s[1], 1);
}

TEST(Newton, UnknownCoefficientLimitsCertificate) {
  Polynomial c = poly({1, 3, 9});
  c.push_back(Padic::zero(3, 40, 2));  // might be as small as 3^2 at X^3
  const auto np = newton_polygon(c);
  EXPECT_EQ(np.certified_until, 0);
  c[3] = Padic::zero(3, 40, 10);
  EXPECT_EQ(newton_polygon(c).certified_until, 2);
}

TEST(Newton, SlopeFactor) {
  // (1 - X)(1 - 3X)(1 - 27X) = 1 - 31X + 111X^2 - 81X^3
  const Polynomial F = poly({1, -31, 111, -81});
  const auto f = slope_le_h_factor(F, parse_rational("2"));
  EXPECT_EQ(f.degree, 2);
  EXPECT_TRUE(f.reliable);
  const Polynomial want = poly({1, -4, 3});
  for (int i = 0; i <= 2; ++i) EXPECT_TRUE(agree(f.small[static_cast<std::size_t>(i)], want[static_cast<std::size_t>(i)], 30));
  EXPECT_TRUE(agree(f.large[1], P(-27), 30));
  for (std::size_t i = 2; i < f.large.size(); ++i) EXPECT_TRUE(f.large[i].valuation() >= 30);
  // Slopes equal to h count.
  EXPECT_EQ(slope_le_h_factor(F, parse_rational("1")).degree, 2);
  EXPECT_EQ(slope_le_h_factor(F, parse_rational("0")).degree, 1);
  EXPECT_THROW(slope_le_h_factor(F, parse_rational("3.5")), PrecisionError);
}

TEST(Newton, ParseRational) {
  EXPECT_EQ(parse_rational("2.99"), mpq_class(299, 100));
  EXPECT_EQ(parse_rational("5/2"), mpq_class(5, 2));
  EXPECT_EQ(parse_rational("-3"), -3);
}
