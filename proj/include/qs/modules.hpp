#pragma once

// Truncated coefficient modules and the matrices of the monoid action
//   (g f)(x) = (det / p^{i+j})^{k2} * kappa((bx + d) / p^j) * f((ax + c) / (bx + d))
// on functions of x in pZ_p, in the basis e_{a,m}(p(a + p^v z)) = z^m.

#include <qs/matrix.hpp>
#include <qs/quaternion.hpp>
#include <qs/weight.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qs {

struct ModuleSpec {
  enum class Kind { Classical, Analytic, Family };

  Kind kind = Kind::Analytic;
  unsigned p = 3;
  int cap = 40;
  int k1 = 0, k2 = 0;
  int v = 0;
  int M = 0;
  /// The character kappa(t) driving the action: t^{k1-k2} for integral
  /// kinds, a family character otherwise.
  WeightCharacter kappa;

  static ModuleSpec classical(unsigned p, int cap, int k1, int k2) {
    if (k1 < k2) throw std::invalid_argument("classical modules need k1 >= k2");
    ModuleSpec s;
    s.kind = Kind::Classical;
    s.p = p;
    s.cap = cap;
    s.k1 = k1;
    s.k2 = k2;
    s.M = k1 - k2;
    s.kappa = WeightCharacter::integral(p, cap, k1 - k2 + 2);
    return s;
  }
  static ModuleSpec analytic(unsigned p, int cap, int k1, int k2, int v, int M) {
    if (v != 0 && v != 1) throw std::invalid_argument("radius index must be 0 or 1");
    if (M < 0) throw std::invalid_argument("truncation degree must be non-negative");
    ModuleSpec s;
    s.kind = Kind::Analytic;
    s.p = p;
    s.cap = cap;
    s.k1 = k1;
    s.k2 = k2;
    s.v = v;
    s.M = M;
    s.kappa = WeightCharacter::integral(p, cap, k1 - k2 + 2);
    return s;
  }
  static ModuleSpec family(const WeightCharacter& kappa, int v, int M) {
    if (!kappa.is_family()) throw std::invalid_argument("family module needs a family character");
    ModuleSpec s = analytic(kappa.p, kappa.cap, kappa.k - 2, 0, v, M);
    s.kind = Kind::Family;
    s.kappa = kappa;
    return s;
  }

  bool is_family() const { return kind == Kind::Family; }
  int discs() const { return v == 0 ? 1 : static_cast<int>(p); }
  int per_disc() const { return M + 1; }
  int dim() const { return kind == Kind::Classical ? k1 - k2 + 1 : discs() * per_disc(); }
  int index(int disc, int m) const { return disc * per_disc() + m; }
  Padic scalar(long n) const { return Padic(p, cap, n); }

  std::string describe() const {
    switch (kind) {
      case Kind::Classical: return "V(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
      case Kind::Analytic:
        return "A^" + std::to_string(v) + "(" + std::to_string(k1) + "," + std::to_string(k2) + ") M=" + std::to_string(M);
      case Kind::Family: return "A^" + std::to_string(v) + "(" + kappa.describe() + ") M=" + std::to_string(M);
    }
    return "?";
  }
};

/// An element of the monoid generated by the Iwahori and diag(p^i, p^j),
/// i >= j, tagged with (i, j) for the rescaled action.
struct MonoidElement {
  Mat2 g;
  int i = 0, j = 0;

  static MonoidElement make(const Mat2& g, int i = 0, int j = 0) {
    MonoidElement e{g, i, j};
    e.validate();
    return e;
  }
  static MonoidElement identity(unsigned p, int cap) { return make(Mat2::identity(p, cap)); }
  /// diag(p^i, p^j).
  static MonoidElement u_p(unsigned p, int cap, int i = 1, int j = 0) {
    Mat2 g = Mat2::identity(p, cap);
    g.a = g.a.shifted(i);
    g.d = g.d.shifted(j);
    return make(g, i, j);
  }

  void validate() const {
    const unsigned p = g.a.prime();
    if (i < j) throw std::invalid_argument("monoid element needs i >= j");
    if (!g.is_integral()) throw std::invalid_argument("monoid element has non-integral entries");
    if (!g.c.is_zero() && g.c.valuation() < 1) throw std::invalid_argument("lower-left entry must be divisible by p");
    const Padic det = g.det();
    if (det.is_zero() || det.valuation() != i + j) throw std::invalid_argument("determinant valuation does not match (i, j)");
    if (g.d.is_zero() || g.d.valuation() != j) throw std::invalid_argument("monoid element outside the expected double coset");
    (void)p;
  }

  friend MonoidElement operator*(const MonoidElement& x, const MonoidElement& y) {
    return make(x.g * y.g, x.i + y.i, x.j + y.j);
  }
};

namespace detail {

/// f * g where f has ring coefficients and g p-adic ones.
template <Coefficient R>
TruncatedSeries<R> mixed_mul(const TruncatedSeries<R>& f, const PadicSeries& g) {
  const int D = f.degree();
  auto r = TruncatedSeries<R>::zero(f[0], D);
  for (int a = 0; a <= D; ++a) {
    if (g[a].is_exact_zero()) continue;
    for (int b = 0; a + b <= D; ++b) {
      if (f[b].is_zero() && f[b].valuation() >= kInfinitePrecision) continue;
      r[a + b] += f[b] * g[a];
    }
  }
  return r;
}

template <Coefficient R>
TruncatedSeries<R> character_expansion(const ModuleSpec& s, const Padic& d, const Padic& beta, int M);

template <>
inline PadicSeries character_expansion<Padic>(const ModuleSpec& s, const Padic& d, const Padic& beta, int M) {
  return character_series(s.kappa, d, beta, M);
}

template <>
inline FamilySeries character_expansion<FamilyCoefficient>(const ModuleSpec& s, const Padic& d, const Padic& beta, int M) {
  return character_series_family(s.kappa, d, beta, M);
}

template <Coefficient R>
Matrix<R> action_matrix_impl(const MonoidElement& e, const ModuleSpec& s) {
  const unsigned p = s.p;
  const int M = s.M;
  const int V = s.kind == ModuleSpec::Kind::Classical ? 0 : s.v;
  const Mat2& g = e.g;
  const Padic pj = s.scalar(1).shifted(e.j);
  // Scalar (det / p^{i+j})^{k2}; families carry no determinant twist.
  Padic scal = s.scalar(1);
  if (!s.is_family()) scal = (g.det().shifted(-(e.i + e.j))).pow(s.k2);
  const int ndiscs = V == 0 ? 1 : static_cast<int>(p);
  const int dim = ndiscs * (M + 1);
  std::optional<Matrix<R>> out;
  for (int a0 = 0; a0 < ndiscs; ++a0) {
    // x = p a0 + p^{1+v} z on the source disc.
    const Padic x0 = s.scalar(static_cast<long>(p) * a0);
    const Padic step = s.scalar(1).shifted(1 + V);
    const auto num = PadicSeries::linear((g.a * x0 + g.c).shifted(-1), g.a * step.shifted(-1), M);
    const auto den = PadicSeries::linear(g.b * x0 + g.d, g.b * step, M);
    const auto q = num * den.inverse();
    PadicSeries base = q;
    int target = 0;
    if (V == 1) {
      if (!q[0].is_integral()) throw std::invalid_argument("monoid element does not preserve pZ_p");
      target = static_cast<int>(q[0].residue(1).get_si());
      base[0] = base[0] - s.scalar(target);
      for (int n = 0; n <= M; ++n) base[n] = base[n].shifted(-1);
    }
    auto col = character_expansion<R>(s, den[0] / pj, g.b * step / pj, M);
    col = col * (col[0].one_like() * scal);
    if (!out) out = Matrix<R>::zero(dim, dim, col[0]);
    for (int m = 0; m <= M; ++m) {
      if (m > 0) col = mixed_mul(col, base);
      const int c = target * (M + 1) + m;
      for (int r = 0; r <= M; ++r) (*out)(a0 * (M + 1) + r, c) = col[r];
    }
  }
  return *out;
}

}  // namespace detail

/// Matrix of g on a classical or analytic (non-family) module.
inline PadicMatrix action_matrix(const MonoidElement& g, const ModuleSpec& s) {
  if (s.is_family()) throw std::invalid_argument("use action_matrix_family for family modules");
  return detail::action_matrix_impl<Padic>(g, s);
}

/// Matrix of g on a family module, entries in Q_p[s]/(s^W).
inline FamilyMatrix action_matrix_family(const MonoidElement& g, const ModuleSpec& s) {
  if (!s.is_family()) throw std::invalid_argument("action_matrix_family needs a family module");
  return detail::action_matrix_impl<FamilyCoefficient>(g, s);
}

/// (A(g1 g2), A(g1) A(g2)); the two agree on rows the truncation controls.
inline std::pair<PadicMatrix, PadicMatrix> monoid_compose_check(const MonoidElement& g1, const MonoidElement& g2, const ModuleSpec& s) {
  return {action_matrix(g1 * g2, s), action_matrix(g1, s) * action_matrix(g2, s)};
}

/// t-th derivative from A^0(k1,k2) truncated at M to A^0(k2-1, k1+1)
/// truncated at M - t: e_m -> m!/(m-t)! p^{-t} e_{m-t}. With `integral`, the
/// matrix is scaled by p^t.
inline PadicMatrix differential_matrix(int t, const ModuleSpec& s, bool integral = false) {
  if (s.kind != ModuleSpec::Kind::Analytic || s.v != 0) throw std::invalid_argument("the differential operator needs v = 0");
  if (t < 1 || t > s.M) throw std::invalid_argument("derivative order out of range");
  PadicMatrix D = PadicMatrix::zero(s.M - t + 1, s.M + 1, s.scalar(0));
  for (int m = t; m <= s.M; ++m) {
    mpz_class f = 1;
    for (int r = m - t + 1; r <= m; ++r) f *= r;
    Padic x(s.p, s.cap, f);
    D(m - t, m) = integral ? x : x.shifted(-t);
  }
  return D;
}

/// Target module of D_{k1-k2+1}.
inline ModuleSpec bgg_target(const ModuleSpec& s, int M) { return ModuleSpec::analytic(s.p, s.cap, s.k2 - 1, s.k1 + 1, 0, M); }

}  // namespace qs
