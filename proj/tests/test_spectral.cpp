#include <qs/spectral.hpp>

#include <gtest/gtest.h>

using namespace qs;

namespace {

WeightSetup setup(int k, int M = 20, int N = 40, int v = 0) {
  WeightSetup w;
  w.k = k;
  w.M = M;
  w.N = N;
  w.v = v;
  return w;
}

}  // namespace

TEST(CharSeries, BoundsHoldForKnownCoefficients) {
  const auto U = hecke_matrix(setup(4).space(), HeckeOp::Up, 3);
  const CharSeries F = char_series(U);
  ASSERT_EQ(F.coeffs.size(), static_cast<std::size_t>(U.rows()) + 1);
  EXPECT_TRUE(F.coeffs[0] == Padic::one(3, 40));
  for (std::size_t j = 0; j < F.coeffs.size(); ++j) {
    if (!F.coeffs[j].is_zero()) {
      EXPECT_GE(F.coeffs[j].valuation(), F.a_priori[j]) << j;
    }
  }
}

TEST(CharSeries, SlopesAreNonNegative) {
  for (int k : {2, 4, 5}) {
    const auto U = hecke_matrix(setup(k).space(), HeckeOp::Up, 3);
    const CharSeries F = char_series(U);
    for (const auto& s : newton_polygon(F.coeffs, F.a_priori).slopes()) EXPECT_GE(s, 0) << "k=" << k;
  }
}

TEST(Slopes, WeightFourHasOneSlopeOneForm) {
  const SlopeReport r = slopes(setup(4), parse_rational("2.9"));
  ASSERT_TRUE(r.certified()) << r.base.error;
  EXPECT_TRUE(r.stable());
  const auto s = r.slopes();
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], 1);
  EXPECT_GE(r.agreement_digits, 30);
}

TEST(Slopes, FactorReproducesSeries) {
  const auto U = hecke_matrix(setup(6).space(), HeckeOp::Up, 3);
  const CharSeries F = char_series(U);
  const auto f = slope_le_h_factor(F.coeffs, parse_rational("4.5"), F.a_priori);
  const Polynomial back = detail::mul_trunc(f.small, f.large, F.coeffs.size());
  for (std::size_t j = 0; j < back.size(); ++j) EXPECT_GE((back[j] - F.coeffs[j]).valuation(), std::min(f.precision, F.coeffs[j].absprec()) - 2) << j;
}

TEST(Slopes, RadiusDoesNotChangeTheFactor) {
  // The wider radius loses precision in the series, hence the larger N.
  const SlopeRun a = slope_run(setup(4, 20, 80, 0), parse_rational("2.9"));
  const SlopeRun b = slope_run(setup(4, 20, 80, 1), parse_rational("2.9"));
  ASSERT_TRUE(a.factor && b.factor) << a.error << b.error;
  EXPECT_EQ(a.factor->degree, b.factor->degree);
  EXPECT_GE(agreement(a.factor->small, b.factor->small, 80), 30);
}

TEST(Classical, OverconvergentMatchesClassical) {
  for (int k : {2, 3, 4}) {
    const ClassicalComparison c = classical_compare(setup(k), mpq_class(k - 1) - mpq_class(1, 100), 30);
    EXPECT_TRUE(c.pass()) << "k=" << k << " " << c.error << " digits " << c.agreement_digits;
  }
}

TEST(SlopeSubspace, HeckeOperatorsCommuteOnIt) {
  const WeightSetup w = setup(4, 20, 50);
  const auto S = w.space();
  const auto U = hecke_matrix(S, HeckeOp::Up, 3);
  const auto T5 = hecke_matrix(S, HeckeOp::Tl, 5);
  const auto T7 = hecke_matrix(S, HeckeOp::Tl, 7);
  const CharSeries F = char_series(U);
  const auto f = slope_le_h_factor(F.coeffs, parse_rational("2.9"), F.a_priori);
  const SlopeSubspace sub = slope_subspace(U, f.small, {{"T_5", T5}, {"T_7", T7}});
  ASSERT_EQ(sub.dim(), 1);
  EXPECT_GE(sub.preservation, 40);
  for (const auto& e : commutation_report({{"U_3", sub.up}, sub.restricted[0], sub.restricted[1]})) EXPECT_GE(e.min_valuation, 40);
  // The eigenvalue of U on the subspace is the reciprocal root of Q.
  EXPECT_TRUE(agree(sub.up(0, 0), -f.small[1], 40));
  // T_5 agrees with the classical computation.
  const auto C = w.classical_space();
  EXPECT_TRUE(agree(sub.restricted[0].matrix(0, 0), hecke_matrix(C, HeckeOp::Tl, 5)(0, 0), 40));
}

TEST(WeightTwo, ConstantFunctionIsEisensteinLike) {
  const auto S = setup(2, 10, 30).space();
  const int n = S.dim;
  std::vector<Padic> one(static_cast<std::size_t>(n), Padic::zero(3, 30));
  one[0] = Padic::one(3, 30);
  auto apply = [&](const PadicMatrix& A) { return A.apply(one); };
  const auto u = apply(hecke_matrix(S, HeckeOp::Up, 3));
  EXPECT_TRUE(agree(u[0], Padic(3, 30, 3), 28));
  for (long l : {5L, 7L, 11L}) {
    const auto t = apply(hecke_matrix(S, HeckeOp::Tl, l));
    EXPECT_TRUE(agree(t[0], Padic(3, 30, l + 1), 28)) << l;
    for (int i = 1; i < n; ++i) EXPECT_GE(t[static_cast<std::size_t>(i)].valuation(), 28);
  }
}

TEST(Etale, RegularAndCriticalPoints) {
  const Padic three(3, 30, 3);
  const Polynomial q{Padic::one(3, 30), three};
  const EtaleDiagnostic ok = etale_diagnostic(4, q);
  EXPECT_TRUE(ok.regular);
  EXPECT_EQ(ok.eigenspace_dim, 1);
  EXPECT_EQ(ok.verdict, "étale expected");
  // alpha = 3 and alpha^2 = 3^(k-1) at k = 3.
  const EtaleDiagnostic bad = etale_diagnostic(3, Polynomial{Padic::one(3, 30), -three});
  EXPECT_FALSE(bad.regular);
  // Degree two: (1 - 3X)(1 + 9X), roots 3 and -9; 3^2 = p^(k-1) at k = 3.
  const Polynomial q2{Padic::one(3, 30), Padic(3, 30, 6), Padic(3, 30, -27)};
  EXPECT_FALSE(etale_diagnostic(3, q2).regular);
  EXPECT_TRUE(etale_diagnostic(4, q2).regular);
  EXPECT_EQ(etale_diagnostic(4, q2).eigenspace_dim, -1);
}

TEST(Family, SpecialisationMatchesFixedWeight) {
  const auto kappa = WeightCharacter::family(3, 40, 4, 5, 6);
  const FamilyFredholm F = family_char_series(kappa, 0, 12);
  const CharSeries direct = char_series(hecke_matrix(setup(4, 12, 40).space(), HeckeOp::Up, 3));
  const Polynomial at4 = F.at(4);
  EXPECT_GE(agreement(at4, direct.coeffs, 40), 35);
  const CharSeries direct490 = char_series(hecke_matrix(setup(490, 12, 40).space(), HeckeOp::Up, 3));
  EXPECT_GE(agreement(F.at(490), direct490.coeffs, 40), 25);
}

TEST(Family, LocalConstancyOverTheDisc) {
  const auto kappa = WeightCharacter::family(3, 40, 4, 5, 6);
  const FamilyFredholm F = family_char_series(kappa, 0, 12);
  const ConstancyReport r = local_constancy_check(F, 2, {4, 490, 4 + 2 * 243 * 3}, 12, 40);
  EXPECT_TRUE(r.pass()) << r.chart_error;
  EXPECT_EQ(r.chart.degree, 1);
  EXPECT_TRUE(r.chart.constant_degree);
  for (const auto& e : r.entries) EXPECT_TRUE(e.pass()) << e.k << " " << e.note;
  EXPECT_THROW(F.at(5), std::invalid_argument);
}

TEST(SlopeMultiset, InclusiveBound) {
  const Padic one = Padic::one(3, 30), three(3, 30, 3);
  // (1 - X)(1 - 3X)
  const Polynomial F{one, -(one + three), three};
  const SlopeMultiset s = slope_multiset(F, 1);
  ASSERT_TRUE(s.certified);
  ASSERT_EQ(s.slopes.size(), 2u);
  EXPECT_EQ(s.slopes[0], std::make_pair(mpq_class(0), 1));
  EXPECT_EQ(s.slopes[1], std::make_pair(mpq_class(1), 1));
  EXPECT_EQ(slope_multiset(F, mpq_class(1, 2)).count(), 1);
  EXPECT_EQ(slope_multiset(Polynomial{one}, 5).count(), 0);
  // An unknown coefficient that could lie on the line spoils the count.
  const Polynomial G{one, Padic(3, 30, 0).with_absprec(1)};
  EXPECT_FALSE(slope_multiset(G, 1).certified);
}

TEST(Bgg, DifferentialIntertwinesUp) {
  const BggCheck b = bgg_check(3, 2, 0, 16, 40);
  EXPECT_TRUE(b.pass()) << b.min_valuation << " vs " << b.precision;
  EXPECT_GE(b.precision, 30);
}
