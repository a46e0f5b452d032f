#pragma once

// Newton polygons of p-adic power series 1 + c_1 X + ... and the factor
// cutting out the part of slope <= h.

#include <qs/padic.hpp>
#include <qs/series.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qs {

struct NewtonSegment {
  int x0, y0, x1, y1;
  mpq_class slope() const {
    mpq_class s(y1 - y0, x1 - x0);
    s.canonicalize();
    return s;
  }
  int length() const { return x1 - x0; }
};

struct NewtonPolygon {
  std::vector<std::pair<int, int>> vertices;
  std::vector<NewtonSegment> segments;
  /// Vertices with x <= certified_until cannot be moved by any coefficient
  /// that is only known up to its precision.
  int certified_until = 0;

  /// Slopes of certified segments, each repeated by its length.
  std::vector<mpq_class> slopes() const {
    std::vector<mpq_class> out;
    for (const auto& s : segments) {
      if (s.x1 > certified_until) break;
      for (int i = 0; i < s.length(); ++i) out.push_back(s.slope());
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::pair<int, int>> lower_hull(const std::vector<std::pair<int, int>>& pts) {
  std::vector<std::pair<int, int>> h;
  for (const auto& q : pts) {
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h.back();
      // Drop b unless it lies strictly below segment a-q.
      const long cross = static_cast<long>(b.first - a.first) * (q.second - a.second) -
                         static_cast<long>(b.second - a.second) * (q.first - a.first);
      if (cross <= 0)
        h.pop_back();
      else
        break;
    }
    h.push_back(q);
  }
  return h;
}

}  // namespace detail

/// Lower convex hull of {(n, v(c_n))}. Exact zeros are absent; coefficients
/// known to be zero only to precision A enter as potential points
/// (n, >= max(A, a_priori[n])) and limit how far the polygon is certified.
/// `a_priori` holds proven lower bounds for v(c_n), if any.
template <Coefficient R>
NewtonPolygon newton_polygon(const std::vector<R>& c, const std::vector<int>& a_priori = {}) {
  std::vector<std::pair<int, int>> known;
  std::vector<std::pair<int, int>> unknown;
  for (int n = 0; n < static_cast<int>(c.size()); ++n) {
    const R& x = c[static_cast<std::size_t>(n)];
    if (x.is_zero() && x.valuation() >= kInfinitePrecision) continue;
    if (x.is_zero()) {
      int bound = x.valuation();
      if (n < static_cast<int>(a_priori.size())) bound = std::max(bound, a_priori[static_cast<std::size_t>(n)]);
      if (bound < kInfinitePrecision) unknown.emplace_back(n, bound);
    }
    else
      known.emplace_back(n, x.valuation());
  }
  NewtonPolygon np;
  if (known.empty() || known.front().first != 0) throw PrecisionError("Newton polygon: constant term unknown");
  np.vertices = detail::lower_hull(known);
  for (std::size_t i = 0; i + 1 < np.vertices.size(); ++i)
    np.segments.push_back({np.vertices[i].first, np.vertices[i].second, np.vertices[i + 1].first, np.vertices[i + 1].second});
  np.certified_until = np.vertices.back().first;
  for (const auto& u : unknown) {
    std::vector<std::pair<int, int>> pts;
    bool placed = false;
    for (const auto& k : known) {
      if (!placed && u.first < k.first) {
        pts.push_back(u);
        placed = true;
      }
      pts.push_back(k);
    }
    if (!placed) pts.push_back(u);
    const auto aug = detail::lower_hull(pts);
    std::size_t i = 0;
    while (i < aug.size() && i < np.vertices.size() && aug[i] == np.vertices[i]) ++i;
    if (i == np.vertices.size()) continue;
    // Vertices before index i are unaffected; the last of them is safe.
    const int safe = i == 0 ? 0 : np.vertices[i - 1].first;
    if (i < aug.size() && aug[i] == u) np.certified_until = std::min(np.certified_until, safe);
  }
  return np;
}

/// Parse "3", "-2", "5/2" or a decimal such as "2.99" into an exact rational.
inline mpq_class parse_rational(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    mpq_class q(s, 10);
    q.canonicalize();
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac = s.size() - dot - 1;
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac; ++i) den *= 10;
  mpq_class q(mpz_class(digits, 10), den);
  q.canonicalize();
  return q;
}

template <class R>
using PolynomialOver = std::vector<R>;
using Polynomial = PolynomialOver<Padic>;

namespace detail {

template <class R>
bool exact_zero(const R& x) {
  return x.is_zero() && x.valuation() >= kInfinitePrecision;
}

template <Coefficient R>
PolynomialOver<R> mul_trunc(const PolynomialOver<R>& a, const PolynomialOver<R>& b, std::size_t len) {
  PolynomialOver<R> r(len, a[0].zero_like());
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (exact_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
      if (exact_zero(b[j])) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

template <Coefficient R>
PolynomialOver<R> inverse_trunc(const PolynomialOver<R>& a, std::size_t len) {
  PolynomialOver<R> r(len, a[0].zero_like());
  const R inv0 = a[0].inverse();
  r[0] = inv0;
  for (std::size_t n = 1; n < len; ++n) {
    R acc = a[0].zero_like();
    for (std::size_t i = 1; i <= n && i < a.size(); ++i) acc += a[i] * r[n - i];
    r[n] = -(acc * inv0);
  }
  return r;
}

/// a = quot * b + rem with deg rem < deg b (b's leading coefficient nonzero).
template <Coefficient R>
std::pair<PolynomialOver<R>, PolynomialOver<R>> divmod(PolynomialOver<R> a, const PolynomialOver<R>& b) {
  const std::size_t db = b.size() - 1;
  const R zero = b[0].zero_like();
  if (a.size() <= db) {
    a.resize(db, zero);
    return {PolynomialOver<R>{zero}, a};
  }
  PolynomialOver<R> q(a.size() - db, zero);
  const R lead_inv = b[db].inverse();
  for (std::size_t i = a.size(); i-- > db;) {
    const R t = a[i] * lead_inv;
    q[i - db] = t;
    if (exact_zero(t)) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= t * b[j];
  }
  a.resize(db, zero);
  return {q, a};
}

}  // namespace detail

template <class R>
struct SlopeFactorizationOver {
  /// Q(0) = 1, degree = number of slopes <= h, reciprocal roots of slope <= h.
  PolynomialOver<R> small;
  /// F / Q, same length as F.
  PolynomialOver<R> large;
  int degree = 0;
  /// The degree is certified by the coefficient precision and the bounds.
  bool reliable = false;
  int iterations = 0;
  /// Absolute digits of `small` justified by the input: a perturbation of
  /// c_j moves a root of slope s by about min_j(A_j - s j) - (v(c_d) - s d),
  /// with A_j the known absolute precision of c_j.
  int precision = kInfinitePrecision;
};
using SlopeFactorization = SlopeFactorizationOver<Padic>;

/// Factor F = Q * S with Q the slope <= h part (h inclusive). Throws
/// PrecisionError when the data do not determine the factor.
/// With `exact`, F is a complete characteristic polynomial rather than a
/// truncated series, so F itself is the answer when every slope is <= h.
template <Coefficient R>
SlopeFactorizationOver<R> slope_le_h_factor(const PolynomialOver<R>& F, const mpq_class& h, const std::vector<int>& a_priori = {},
                                            bool exact = false) {
  using Poly = PolynomialOver<R>;
  // d is where a line of slope h supports the polygon: the largest minimiser
  // of v(c_j) - h j. It is certified when no proven lower bound drops below
  // that line, strictly above it past d.
  const int n_coeffs = static_cast<int>(F.size());
  auto lower_bound = [&](int j) -> mpq_class {
    const R& x = F[static_cast<std::size_t>(j)];
    int b = x.valuation();
    if (x.is_zero() && j < static_cast<int>(a_priori.size())) b = std::max(b, a_priori[static_cast<std::size_t>(j)]);
    return mpq_class(b) - h * j;
  };
  int d = -1;
  mpq_class best;
  for (int j = 0; j < n_coeffs; ++j) {
    const R& x = F[static_cast<std::size_t>(j)];
    if (x.is_zero()) continue;
    const mpq_class e = mpq_class(x.valuation()) - h * j;
    if (d < 0 || e <= best) {
      d = j;
      best = e;
    }
  }
  if (d != 0 && (d < 0 || F[0].valuation() != 0)) throw PrecisionError("series does not start with a unit");
  for (int j = 0; j < n_coeffs; ++j) {
    if (j == d || detail::exact_zero(F[static_cast<std::size_t>(j)])) continue;
    const mpq_class lb = lower_bound(j);
    if (j < d ? lb < best : lb <= best) throw PrecisionError("slope <= h part is not determined by the available precision");
  }
  SlopeFactorizationOver<R> out;
  out.degree = d;
  out.reliable = true;
  mpq_class s_max = 0;
  if (d > 0) {
    for (int j = 0; j < d; ++j) {
      const R& x = F[static_cast<std::size_t>(j)];
      if (x.is_zero()) continue;
      const mpq_class sl(F[static_cast<std::size_t>(d)].valuation() - x.valuation(), d - j);
      if (j == 0 || sl > s_max) s_max = sl;
    }
    mpq_class worst = mpq_class(kInfinitePrecision);
    for (int j = 0; j < n_coeffs; ++j) {
      const R& x = F[static_cast<std::size_t>(j)];
      if (detail::exact_zero(x)) continue;
      int A = x.absprec();
      if (x.is_zero() && j < static_cast<int>(a_priori.size())) A = std::max(A, a_priori[static_cast<std::size_t>(j)]);
      if (A >= kInfinitePrecision) continue;
      worst = std::min(worst, mpq_class(mpq_class(A) - s_max * j));
    }
    const mpq_class digits = worst - (mpq_class(F[static_cast<std::size_t>(d)].valuation()) - s_max * d);
    if (digits < kInfinitePrecision) {
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), digits.get_num_mpz_t(), digits.get_den_mpz_t());
      out.precision = static_cast<int>(fl.get_si());
    }
    if (out.precision <= 0) throw PrecisionError("slope <= h factor has no correct digits at this precision");
  }
  if (exact && d == n_coeffs - 1) {
    out.small = F;
    out.large = {F[0].one_like()};
    return out;
  }
  if (d == n_coeffs - 1) throw PrecisionError("every available slope is <= h; increase the truncation");
  if (d == 0) {
    out.small = {F[0].one_like()};
    out.large = F;
    return out;
  }
  // Zero-to-precision coefficients are sharpened by their proven bounds, and
  // the tail that cannot move the factor at the estimated precision is cut.
  // Without both, dividing by Q (whose roots are large) amplifies the
  // uncertainty of high coefficients by p^s per degree.
  const R zero = F[0].zero_like();
  const mpq_class offset = mpq_class(F[static_cast<std::size_t>(d)].valuation()) - s_max * d;
  Poly G;
  int keep = d + 2;
  for (int j = 0; j < n_coeffs; ++j) {
    R x = F[static_cast<std::size_t>(j)];
    if (x.is_zero() && j < static_cast<int>(a_priori.size()) && a_priori[static_cast<std::size_t>(j)] > x.valuation())
      x = zero.with_absprec(a_priori[static_cast<std::size_t>(j)]);
    if (!detail::exact_zero(x) && mpq_class(mpq_class(x.valuation()) - s_max * j) - offset < out.precision + 2) keep = std::max(keep, j + 1);
    G.push_back(std::move(x));
  }
  G.resize(static_cast<std::size_t>(std::min(keep, n_coeffs)));
  const std::size_t len = G.size();
  const int n = static_cast<int>(len) - 1;
  Poly Q(G.begin(), G.begin() + d + 1);
  // Start from S = 1. Starting from the power series F / Q instead makes
  // F - QS vanish to coefficient precision while Q is still wrong, since the
  // error then hides in high powers of X.
  Poly S(static_cast<std::size_t>(n - d) + 1, zero);
  S[0] = F[0].one_like();
  Poly T{F[0].one_like()};
  auto mod_q = [&](const Poly& a) { return detail::divmod(a, Q).second; };
  for (int it = 0; it < 64; ++it) {
    out.iterations = it + 1;
    const Poly QS = detail::mul_trunc(Q, S, len);
    Poly E(len, zero);
    bool exact = true;
    for (std::size_t i = 0; i < len; ++i) {
      E[i] = G[i] - QS[i];
      if (!E[i].is_zero()) exact = false;
    }
    if (exact) break;
    // S is a unit modulo Q: its values at the roots of Q are 1 plus
    // something small. Refine T = S^{-1} mod Q by Newton steps.
    const Poly Sq = mod_q(S);
    for (int k = 0; k < 64; ++k) {
      Poly ST = mod_q(detail::mul_trunc(Sq, T, Sq.size() + T.size()));
      Poly two_minus(ST.size(), zero);
      bool settled = true;
      for (std::size_t i = 0; i < ST.size(); ++i) {
        two_minus[i] = -ST[i];
        if (i == 0) two_minus[i] += F[0].from_int(2);
        const R dev = i == 0 ? ST[i] - F[0].one_like() : ST[i];
        if (!dev.is_zero()) settled = false;
      }
      if (settled) break;
      T = mod_q(detail::mul_trunc(T, two_minus, T.size() + two_minus.size()));
    }
    Poly r = mod_q(detail::mul_trunc(E, T, E.size() + T.size()));
    Poly dQ(static_cast<std::size_t>(d) + 1, zero);
    for (std::size_t i = 0; i < r.size(); ++i) dQ[i] = r[i];
    const R r0 = dQ[0];
    for (std::size_t i = 0; i < dQ.size(); ++i) dQ[i] -= r0 * Q[i];
    Poly rest = E;
    const Poly SdQ = detail::mul_trunc(S, dQ, len);
    for (std::size_t i = 0; i < len; ++i) rest[i] -= SdQ[i];
    Poly dS = detail::divmod(rest, Q).first;
    bool moved = false;
    for (std::size_t i = 0; i < dQ.size(); ++i) {
      if (!dQ[i].is_zero()) moved = true;
      Q[i] += dQ[i];
    }
    for (std::size_t i = 0; i < dS.size() && i < S.size(); ++i) {
      if (!dS[i].is_zero()) moved = true;
      S[i] += dS[i];
    }
    if (!moved) break;
  }
  Q[0] = F[0].one_like();
  for (std::size_t i = 1; i < Q.size(); ++i) Q[i] = Q[i].with_absprec(out.precision);
  out.large = detail::mul_trunc(F, detail::inverse_trunc(Q, F.size()), F.size());
  out.small = std::move(Q);
  return out;
}

}  // namespace qs
