#pragma once

// Spectral data of U_p: Fredholm series, certified slopes, the slope <= h
// subspace with the Hecke operators restricted to it, comparison with the
// classical space, and the same data over a weight disc.

#include <qs/hecke.hpp>
#include <qs/newton.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace qs {

template <class R>
struct CharSeriesOver {
  /// det(1 - X U), c_0 = 1.
  PolynomialOver<R> coeffs;
  /// Proven lower bounds for v(c_j).
  std::vector<int> a_priori;
};
using CharSeries = CharSeriesOver<Padic>;

/// v(c_j) >= sum of the j smallest row valuations, since every term of a
/// j x j principal minor takes one entry from each of j distinct rows.
template <Coefficient R>
std::vector<int> row_valuation_bounds(const Matrix<R>& U) {
  std::vector<long> rho;
  for (int r = 0; r < U.rows(); ++r) {
    long m = kInfinitePrecision;
    for (int c = 0; c < U.cols(); ++c) m = std::min<long>(m, U(r, c).valuation());
    rho.push_back(m);
  }
  std::sort(rho.begin(), rho.end());
  std::vector<int> out{0};
  long acc = 0;
  for (long x : rho) {
    acc = std::min<long>(acc + x, kInfinitePrecision);
    out.push_back(static_cast<int>(acc));
  }
  return out;
}

template <Coefficient R>
CharSeriesOver<R> char_series(const Matrix<R>& U) {
  return {char_series_berkowitz(U), row_valuation_bounds(U)};
}

/// Smallest v(a_i - b_i), capped at `limit`; both lists padded with zeros.
inline int agreement(const Polynomial& a, const Polynomial& b, int limit) {
  int best = limit;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Padic& proto = a.empty() ? b[0] : a[0];
    const Padic x = i < a.size() ? a[i] : proto.zero_like();
    const Padic y = i < b.size() ? b[i] : proto.zero_like();
    best = std::min(best, (x - y).valuation());
  }
  return best;
}

/// Slopes of a polynomial with known coefficients, with multiplicity.
inline std::vector<mpq_class> polynomial_slopes(const Polynomial& Q) {
  std::vector<mpq_class> out;
  if (Q.size() <= 1) return out;
  const NewtonPolygon np = newton_polygon(Q);
  for (const auto& s : np.segments)
    for (int i = 0; i < s.length(); ++i) out.push_back(s.slope());
  return out;
}

struct SlopeMultiset {
  /// (slope, multiplicity), increasing.
  std::vector<std::pair<mpq_class, int>> slopes;
  /// No coefficient known only to precision can change the list.
  bool certified = false;
  int count() const {
    int n = 0;
    for (const auto& s : slopes) n += s.second;
    return n;
  }
};

/// Eigenvalue slopes <= h (inclusive) read off the Newton polygon.
inline SlopeMultiset slope_multiset(const Polynomial& F, const mpq_class& h, const std::vector<int>& a_priori = {}) {
  SlopeMultiset out;
  const NewtonPolygon np = newton_polygon(F, a_priori);
  int d = 0;
  for (const auto& seg : np.segments) {
    if (seg.slope() > h) break;
    if (!out.slopes.empty() && out.slopes.back().first == seg.slope())
      out.slopes.back().second += seg.length();
    else
      out.slopes.emplace_back(seg.slope(), seg.length());
    d = seg.x1;
  }
  out.certified = d <= np.certified_until;
  const mpq_class line = mpq_class(F[static_cast<std::size_t>(d)].valuation()) - h * d;
  for (int j = 0; j < static_cast<int>(F.size()) && out.certified; ++j) {
    const Padic& x = F[static_cast<std::size_t>(j)];
    if (j == d || x.is_exact_zero()) continue;
    int b = x.valuation();
    if (x.is_zero() && j < static_cast<int>(a_priori.size())) b = std::max(b, a_priori[static_cast<std::size_t>(j)]);
    const mpq_class e = mpq_class(b) - h * j;
    if (j < d ? e < line : e <= line) out.certified = false;
  }
  return out;
}

/// Overconvergent forms of weight k (coefficients A(k-2, 0)).
struct WeightSetup {
  unsigned p = 3;
  int k = 4;
  int v = 0;
  int M = 40;
  int N = 60;
  int splitting_choice = 0;

  ModuleSpec module() const { return ModuleSpec::analytic(p, N, k - 2, 0, v, M); }
  ModuleSpec classical_module() const { return ModuleSpec::classical(p, N, k - 2, 0); }
  CosetDatum cosets() const { return double_cosets(split_at_p(p, N, splitting_choice), splitting_choice); }
  AutomorphicSpace space() const { return build_space(module(), cosets()); }
  AutomorphicSpace classical_space() const { return build_space(classical_module(), cosets()); }
};

struct SlopeRun {
  int M = 0;
  PadicMatrix U;
  CharSeries series;
  NewtonPolygon polygon;
  std::optional<SlopeFactorization> factor;
  /// Why the factor is missing.
  std::string error;
};

inline SlopeRun slope_run(const WeightSetup& w, const mpq_class& h, std::optional<std::uint64_t> seed = {}) {
  SlopeRun run;
  run.M = w.M;
  run.U = hecke_matrix(w.space(), HeckeOp::Up, static_cast<long>(w.p), seed);
  run.series = char_series(run.U);
  run.polygon = newton_polygon(run.series.coeffs, run.series.a_priori);
  try {
    run.factor = slope_le_h_factor(run.series.coeffs, h, run.series.a_priori);
  } catch (const PrecisionError& e) {
    run.error = e.what();
  }
  return run;
}

struct SlopeReport {
  WeightSetup setup;
  mpq_class h;
  SlopeRun base;
  /// Same computation at truncation M + step.
  SlopeRun extended;
  int step = 10;
  /// Digits to which the two slope <= h factors agree.
  int agreement_digits = 0;
  int required_digits = 0;

  bool certified() const { return base.factor.has_value() && extended.factor.has_value(); }
  bool stable() const {
    return certified() && base.factor->degree == extended.factor->degree && agreement_digits >= required_digits;
  }
  /// Slopes <= h with multiplicity (empty when uncertified).
  std::vector<mpq_class> slopes() const { return certified() ? polynomial_slopes(base.factor->small) : std::vector<mpq_class>{}; }
};

/// Slopes <= h at truncation M, confirmed by repeating at M + step.
/// `required_digits` defaults to half the working precision.
inline SlopeReport slopes(const WeightSetup& w, const mpq_class& h, int step = 10, std::optional<int> required_digits = {}) {
  SlopeReport r;
  r.setup = w;
  r.h = h;
  r.step = step;
  r.required_digits = required_digits.value_or(w.N / 2);
  r.base = slope_run(w, h);
  WeightSetup w2 = w;
  w2.M = w.M + step;
  r.extended = slope_run(w2, h);
  if (r.certified()) r.agreement_digits = agreement(r.base.factor->small, r.extended.factor->small, w.N);
  return r;
}

/// Hecke operators restricted to ker Q*(U), Q*(X) = X^d Q(1/X).
struct SlopeSubspace {
  SaturatedBasis basis;
  PadicMatrix up;
  std::vector<NamedOperator> restricted;
  /// Smallest valuation of T B - B T|, i.e. how well each operator preserves
  /// the subspace (kInfinitePrecision when d = 0).
  int preservation = kInfinitePrecision;
  int dim() const { return basis.dim(); }
};

inline PadicMatrix reversed_polynomial_at(const Polynomial& Q, const PadicMatrix& U) {
  const int n = U.rows();
  const Padic proto = U(0, 0).zero_like();
  PadicMatrix P = PadicMatrix::identity(n, proto);
  const PadicMatrix I = PadicMatrix::identity(n, proto);
  for (std::size_t i = 1; i < Q.size(); ++i) P = P * U + I * Q[i];
  return P;
}

namespace detail {

inline PadicMatrix restrict_to(const PadicMatrix& T, const SaturatedBasis& B, int& residual) {
  const int d = B.dim();
  const PadicMatrix image = T * B.basis;
  PadicMatrix out = PadicMatrix::zero(d, d, T(0, 0));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(r, c) = image(B.pivots[static_cast<std::size_t>(r)], c);
  residual = std::min(residual, (image - B.basis * out).min_valuation());
  return out;
}

}  // namespace detail

/// ker Q*(U). Q*(U) is invertible on the slope > h part, where its smallest
/// pivots have valuation about v(Q(d)); noise sits near the precision. The
/// kernel threshold is taken halfway.
inline SlopeSubspace slope_subspace(const PadicMatrix& U, const Polynomial& Q, const std::vector<NamedOperator>& others = {}) {
  SlopeSubspace out;
  const int d = static_cast<int>(Q.size()) - 1;
  const PadicMatrix P = reversed_polynomial_at(Q, U);
  int noise = kInfinitePrecision;
  for (int r = 0; r < P.rows(); ++r)
    for (int c = 0; c < P.cols(); ++c) noise = std::min(noise, P(r, c).absprec());
  const int signal = Q.back().valuation();
  if (noise <= signal + 1) throw PrecisionError("slope subspace: precision does not separate the slope <= h part");
  out.basis = kernel(P, (noise + signal + 1) / 2);
  if (out.basis.dim() != d)
    throw PrecisionError("slope subspace has dimension " + std::to_string(out.basis.dim()) + ", expected " + std::to_string(d));
  if (d == 0) return out;
  out.up = detail::restrict_to(U, out.basis, out.preservation);
  for (const auto& op : others) out.restricted.push_back({op.name, detail::restrict_to(op.matrix, out.basis, out.preservation)});
  return out;
}

struct ClassicalComparison {
  int k = 0;
  mpq_class h;
  int classical_dim = 0;
  Polynomial overconvergent;
  Polynomial classical;
  int agreement_digits = 0;
  int required_digits = 0;
  std::string error;

  bool pass() const {
    return error.empty() && overconvergent.size() == classical.size() && agreement_digits >= required_digits;
  }
};

/// Slope <= h factor from the overconvergent space against the one from the
/// classical space. The classical side uses kernel invariants, one witness
/// per coset and a different splitting, so it shares no code path with the
/// truncated computation beyond the coset enumeration.
inline ClassicalComparison classical_compare(const WeightSetup& w, const mpq_class& h, int required_digits) {
  ClassicalComparison out;
  out.k = w.k;
  out.h = h;
  out.required_digits = required_digits;
  WeightSetup cw = w;
  cw.splitting_choice = w.splitting_choice + 1;
  const AutomorphicSpace CS = cw.classical_space();
  out.classical_dim = CS.dim;
  const PadicMatrix U = CS.dim > 0 ? hecke_matrix(CS, HeckeOp::Up, static_cast<long>(w.p)) : PadicMatrix();
  const Polynomial P = CS.dim > 0 ? char_series_berkowitz(U) : Polynomial{CS.spec.scalar(1)};
  try {
    out.classical = slope_le_h_factor(P, h, {}, true).small;
    const SlopeRun run = slope_run(w, h);
    if (!run.factor) throw PrecisionError(run.error);
    out.overconvergent = run.factor->small;
  } catch (const PrecisionError& e) {
    out.error = e.what();
    return out;
  }
  out.agreement_digits = agreement(out.overconvergent, out.classical, w.N);
  return out;
}

/// Fredholm series over a weight disc.
struct FamilyFredholm {
  WeightCharacter kappa;
  int v = 0;
  int M = 0;
  CharSeriesOver<FamilyCoefficient> series;

  Polynomial at(int k) const {
    const Padic s = kappa.coordinate_of(k);
    Polynomial out;
    for (const auto& c : series.coeffs) out.push_back(c.specialize(s));
    return out;
  }
};

inline FamilyFredholm family_char_series(const WeightCharacter& kappa, int v, int M) {
  FamilyFredholm out;
  out.kappa = kappa;
  out.v = v;
  out.M = M;
  const ModuleSpec spec = ModuleSpec::family(kappa, v, M);
  const AutomorphicSpace S = build_space(spec, double_cosets(split_at_p(kappa.p, kappa.cap)));
  out.series = char_series(hecke_matrix_family(S, HeckeOp::Up, static_cast<long>(kappa.p)));
  return out;
}

/// Slope <= h factor Q(s, X) over the disc.
struct FamilyChart {
  int degree = 0;
  PolynomialOver<FamilyCoefficient> factor;
  /// Every coefficient Q_j(s) has a constant term strictly dominating the
  /// rest, so |Q_j(s)| is constant on the disc; for the leading one this
  /// keeps the X-degree constant.
  bool constant_degree = false;
};

inline bool dominant_constant(const FamilyCoefficient& c) {
  if (c[0].is_zero()) return false;
  for (int n = 1; n < c.width(); ++n)
    if (!c[n].is_exact_zero() && c[n].valuation() <= c[0].valuation()) return false;
  return true;
}

inline FamilyChart family_chart(const FamilyFredholm& F, const mpq_class& h) {
  FamilyChart out;
  const auto f = slope_le_h_factor(F.series.coeffs, h, F.series.a_priori);
  out.degree = f.degree;
  out.factor = f.small;
  out.constant_degree = dominant_constant(f.small.back());
  return out;
}

struct ConstancyEntry {
  int k = 0;
  /// -1 when the count is not certified.
  int direct = -1;
  int specialized = -1;
  int chart = -1;
  std::string note;
  bool pass() const { return direct >= 0 && direct == specialized && direct == chart; }
};

struct ConstancyReport {
  FamilyChart chart;
  std::string chart_error;
  std::vector<ConstancyEntry> entries;
  bool pass() const {
    if (!chart_error.empty() || !chart.constant_degree) return false;
    return std::all_of(entries.begin(), entries.end(), [](const ConstancyEntry& e) { return e.pass(); });
  }
};

/// Slope <= h counts at each weight three ways: a direct fixed-weight run,
/// the family series specialised at the weight, and the chart degree.
inline ConstancyReport local_constancy_check(const FamilyFredholm& F, const mpq_class& h, const std::vector<int>& weights, int M, int N) {
  ConstancyReport out;
  try {
    out.chart = family_chart(F, h);
  } catch (const std::exception& e) {
    out.chart_error = e.what();
  }
  for (int k : weights) {
    ConstancyEntry e;
    e.k = k;
    if (out.chart_error.empty()) e.chart = out.chart.degree;
    try {
      const Polynomial s = F.at(k);
      e.specialized = slope_le_h_factor(s, h, F.series.a_priori).degree;
      WeightSetup w;
      w.p = F.kappa.p;
      w.k = k;
      w.v = F.v;
      w.M = M;
      w.N = N;
      const SlopeRun run = slope_run(w, h);
      if (run.factor)
        e.direct = run.factor->degree;
      else
        e.note = run.error;
    } catch (const std::exception& ex) {
      e.note = ex.what();
    }
    out.entries.push_back(e);
  }
  return out;
}

struct EtaleDiagnostic {
  /// Q*(X)Q*(-X) does not vanish at X^2 = p^{k-1}: no eigenvalue has
  /// alpha^2 = p^{k-1}.
  bool regular = false;
  /// Dimension of the alpha-eigenspace for a degree one factor, else -1.
  int eigenspace_dim = -1;
  /// X-degree of the family slope factor through the point, if known.
  std::optional<int> family_degree;
  std::string verdict;
};

/// Heuristic check that the weight map is étale at a classical point of
/// weight k, from the slope <= h factor Q there.
inline EtaleDiagnostic etale_diagnostic(int k, const Polynomial& Q, std::optional<int> family_degree = {}) {
  EtaleDiagnostic out;
  out.family_degree = family_degree;
  const int d = static_cast<int>(Q.size()) - 1;
  if (d == 0) {
    out.verdict = "no slope <= h forms";
    return out;
  }
  // Q*(X) = sum_e Q[d-e] X^e = E(X^2) + X O(X^2), and
  // Q*(a) Q*(-a) = E(c)^2 - c O(c)^2 with c = a^2.
  const Padic c = Q[0].one_like().shifted(k - 1);
  Padic E = Q[0].zero_like(), O = Q[0].zero_like();
  for (int e = d; e >= 0; --e) {
    const Padic& q = Q[static_cast<std::size_t>(d - e)];
    if (e % 2 == 0)
      E = E * c + q;
    else
      O = O * c + q;
  }
  const Padic disc = E * E - c * O * O;
  out.regular = !disc.is_zero();
  if (d == 1) out.eigenspace_dim = 1;
  if (!out.regular)
    out.verdict = "critical: alpha^2 = p^(k-1)";
  else if (out.eigenspace_dim == 1 && family_degree.value_or(1) == 1)
    out.verdict = "étale expected";
  else if (out.eigenspace_dim == 1)
    out.verdict = "undetermined: family factor of degree " + std::to_string(*family_degree);
  else if (out.eigenspace_dim > 1)
    out.verdict = "not étale: eigenspace of dimension " + std::to_string(out.eigenspace_dim);
  else
    out.verdict = "undetermined: slope factor of degree " + std::to_string(d);
  return out;
}

struct BggCheck {
  int k1 = 0, k2 = 0, M = 0, N = 0;
  /// Rows compared per coset block (the truncation controls 0..M-t).
  int rows = 0;
  /// Smallest valuation of D U - p^t U D and the precision it is known to.
  int min_valuation = kInfinitePrecision;
  int precision = kInfinitePrecision;
  bool pass() const { return min_valuation >= precision; }
};

/// D_t U_p = p^t U_p D_t on the automorphic spaces, t = k1 - k2 + 1, with
/// D_t the integral differential operator on every coset block.
inline BggCheck bgg_check(unsigned p, int k1, int k2, int M, int N) {
  BggCheck out{k1, k2, M, N};
  const int t = k1 - k2 + 1;
  const ModuleSpec src = ModuleSpec::analytic(p, N, k1, k2, 0, M);
  const ModuleSpec tgt = bgg_target(src, M - t);
  const CosetDatum cd = double_cosets(split_at_p(p, N));
  const AutomorphicSpace S = build_space(src, cd), T = build_space(tgt, cd);
  const PadicMatrix D1 = differential_matrix(t, src, true);
  PadicMatrix D = PadicMatrix::zero(T.dim, S.dim, src.scalar(0));
  for (int i = 0; i < cd.size(); ++i) D.set_block(T.offset[static_cast<std::size_t>(i)], S.offset[static_cast<std::size_t>(i)], D1);
  const PadicMatrix lhs = D * hecke_matrix(S, HeckeOp::Up, static_cast<long>(p));
  const PadicMatrix rhs = hecke_matrix(T, HeckeOp::Up, static_cast<long>(p)) * D * src.scalar(1).shifted(t);
  const PadicMatrix diff = lhs - rhs;
  out.rows = M - t + 1;
  for (int i = 0; i < cd.size(); ++i)
    for (int r = 0; r < out.rows; ++r)
      for (int c = 0; c < diff.cols(); ++c) {
        const Padic& x = diff(T.offset[static_cast<std::size_t>(i)] + r, c);
        out.precision = std::min(out.precision, x.absprec());
        if (!x.is_zero()) out.min_valuation = std::min(out.min_valuation, x.valuation());
      }
  return out;
}

}  // namespace qs
