#pragma once

// Characters of Z_p^x: integral weights z -> z^{k-2} and one-parameter
// families over a disc around an integral weight, plus their local
// expansions kappa(d + beta z) used by the coefficient modules.

#include <qs/family.hpp>
#include <qs/series.hpp>

#include <stdexcept>
#include <string>
#include <variant>

namespace qs {

/// The character is not analytic enough for the requested disc.
struct AnalyticityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Teichmüller representative of a unit: the (p-1)-th root of unity
/// congruent to u mod p.
inline Padic teichmuller(const Padic& u) {
  if (!u.is_unit()) throw std::invalid_argument("teichmuller: argument is not a unit");
  Padic x = u;
  for (int i = 0; i < u.absprec() + 2; ++i) {
    Padic y = x.pow(u.prime());
    if (y == x) break;
    x = y;
  }
  return x;
}

/// log(u) for u in 1 + pZ_p.
inline Padic padic_log(const Padic& u) {
  const Padic one = u.one_like();
  const Padic t = u - one;
  if (t.valuation() < 1) throw std::invalid_argument("padic_log: argument not in 1 + pZ_p");
  if (t.is_zero()) return u.zero_like().with_absprec(t.absprec());
  const int target = std::min(u.absprec(), u.cap() + 1);
  const unsigned p = u.prime();
  // Term j has valuation j v(t) - v_p(j) >= j v(t) - log_p(j).
  auto log_p = [p](int j) {
    int e = 0;
    for (long q = p; q <= j; q *= p) ++e;
    return e;
  };
  int J = 1;
  while (J * t.valuation() - log_p(J) <= target) ++J;
  Padic acc = u.zero_like();
  Padic power = one;
  for (int j = 1; j < J; ++j) {
    power = power * t;
    const Padic term = power / u.from_int(j);
    acc = (j % 2 == 1) ? acc + term : acc - term;
  }
  return acc;
}

/// n-th binomial coefficient with a p-adic top argument.
inline Padic binomial(const Padic& x, int n) {
  Padic acc = x.one_like();
  for (int i = 0; i < n; ++i) acc = acc * (x - x.from_int(i)) / x.from_int(i + 1);
  return acc;
}

struct WeightCharacter {
  enum class Kind { Integral, Family };

  unsigned p = 3;
  int cap = 40;
  Kind kind = Kind::Integral;
  /// Integral weight, or the centre of the family.
  int k = 2;
  /// Exponent of the Teichmüller character on (Z/pZ)^x.
  int eps_exponent = 0;
  /// Family disc scale: s is the coordinate of p^m s = (1+p)^{k-k0} - 1.
  int scale_m = 1;
  /// Family coefficients are polynomials in s modulo s^width.
  int width = 1;

  static WeightCharacter integral(unsigned p, int cap, int k) {
    if (p % 2 == 0) throw std::invalid_argument("even primes are not supported");
    WeightCharacter w;
    w.p = p;
    w.cap = cap;
    w.kind = Kind::Integral;
    w.k = k;
    w.eps_exponent = mod(k - 2, static_cast<int>(p) - 1);
    return w;
  }
  static WeightCharacter family(unsigned p, int cap, int k0, int m, int W) {
    if (m < 1) throw std::invalid_argument("family scale exponent must be positive");
    WeightCharacter w = integral(p, cap, k0);
    w.kind = Kind::Family;
    w.scale_m = m;
    w.width = W;
    return w;
  }

  bool is_family() const { return kind == Kind::Family; }
  Padic scalar(long n) const { return Padic(p, cap, n); }

  /// Disc coordinate of the integral weight k2 (exact), or an error if k2 is
  /// not on this family's disc.
  Padic coordinate_of(int k2) const {
    if (!is_family()) throw std::invalid_argument("coordinate_of: not a family");
    if (mod(k2 - k, static_cast<int>(p) - 1) != 0)
      throw std::invalid_argument("weight " + std::to_string(k2) + " lies in another component of weight space");
    const Padic num = scalar(1 + static_cast<long>(p)).pow(k2 - k) - scalar(1);
    const Padic s = num.shifted(-scale_m);
    if (!s.is_zero() && s.valuation() < 0)
      throw std::invalid_argument("weight " + std::to_string(k2) + " is outside the family disc");
    return s;
  }

  std::string describe() const {
    if (!is_family()) return "integral k=" + std::to_string(k);
    return "family k0=" + std::to_string(k) + " m=" + std::to_string(scale_m) + " W=" + std::to_string(width);
  }

  static int mod(int a, int n) { return ((a % n) + n) % n; }
};

/// Restriction of the character to the Teichmüller roots of unity.
inline int epsilon_exponent(const WeightCharacter& w) { return w.eps_exponent; }

inline Padic eval_integral(const WeightCharacter& w, const Padic& u) {
  if (!u.is_unit()) throw std::invalid_argument("characters are evaluated on units");
  if (w.is_family()) throw std::invalid_argument("eval_integral on a family character");
  return u.pow(w.k - 2);
}

/// kappa(u) in Q_p[s]/(s^W).
inline FamilyCoefficient eval_family(const WeightCharacter& w, const Padic& u) {
  if (!u.is_unit()) throw std::invalid_argument("characters are evaluated on units");
  if (!w.is_family()) return FamilyCoefficient(eval_integral(w, u), 1);
  const Padic om = teichmuller(u);
  const Padic bracket = u / om;
  const Padic ell = padic_log(bracket) / padic_log(w.scalar(1 + static_cast<long>(w.p)));
  const Padic base = om.pow(w.eps_exponent) * bracket.pow(w.k - 2);
  std::vector<Padic> c;
  const Padic pm = w.scalar(1).shifted(w.scale_m);
  Padic scale = w.scalar(1);
  for (int n = 0; n < w.width; ++n) {
    c.push_back(base * binomial(ell, n) * scale);
    scale = scale * pm;
  }
  return FamilyCoefficient(std::move(c));
}

using CharacterValue = std::variant<Padic, FamilyCoefficient>;

inline CharacterValue eval_character(const WeightCharacter& w, const Padic& u) {
  if (w.is_family()) return eval_family(w, u);
  return eval_integral(w, u);
}

namespace detail {

inline void require_integral(const PadicSeries& f, const char* what) {
  for (int j = 0; j <= f.degree(); ++j)
    if (!f[j].is_zero() && f[j].valuation() < 0)
      throw AnalyticityError(std::string(what) + ": character is not analytic on this disc; raise v");
}

/// log(1 + g z) / log(1 + p) as a series; v(g) >= 1.
inline PadicSeries log_ratio_series(const WeightCharacter& w, const Padic& g, int M) {
  auto L = PadicSeries::zero(g, M);
  const Padic denom = padic_log(w.scalar(1 + static_cast<long>(w.p)));
  Padic gp = g.one_like();
  for (int j = 1; j <= M; ++j) {
    gp = gp * g;
    Padic t = gp / g.from_int(j) / denom;
    L[j] = (j % 2 == 1) ? t : -t;
  }
  return L;
}

}  // namespace detail

/// z -> kappa(d + beta z) truncated at degree M, over Q_p (integral weights).
inline PadicSeries character_series(const WeightCharacter& w, const Padic& d, const Padic& beta, int M) {
  if (w.is_family()) throw std::invalid_argument("family characters expand over the family ring");
  if (!d.is_unit()) throw std::invalid_argument("character_series: constant term must be a unit");
  const auto lin = PadicSeries::linear(d, beta, M);
  auto f = lin.pow(w.k - 2);
  detail::require_integral(f, "character_series");
  return f;
}

/// z -> kappa(d + beta z) over the family ring. Requires v(beta) >= 1.
inline FamilySeries character_series_family(const WeightCharacter& w, const Padic& d, const Padic& beta, int M) {
  if (!d.is_unit()) throw std::invalid_argument("character_series: constant term must be a unit");
  const int W = w.is_family() ? w.width : 1;
  const FamilyCoefficient fzero(d.zero_like(), W);
  if (!w.is_family()) {
    const auto f = character_series(w, d, beta, M);
    return f.map([&](const Padic& x) { return FamilyCoefficient(x, W); });
  }
  const Padic g = beta / d;
  if (!g.is_zero() && g.valuation() < 1) throw AnalyticityError("family character needs v(beta/d) >= 1 on this disc");
  // kappa(d) * (1 + g z)^{k0-2} * sum_n binom(L(z), n) (p^m s)^n
  const FamilyCoefficient at_d = eval_family(w, d);
  const auto power = PadicSeries::linear(d.one_like(), g, M).pow(w.k - 2);
  const auto L = detail::log_ratio_series(w, g, M);
  std::vector<PadicSeries> binoms;
  binoms.push_back(PadicSeries::constant(d.one_like(), M));
  for (int n = 1; n < W; ++n) {
    auto shifted = L;
    shifted[0] = shifted[0] - d.from_int(n - 1);
    binoms.push_back(binoms.back() * shifted * d.from_int(n).inverse());
  }
  std::vector<FamilyCoefficient> coeffs(static_cast<std::size_t>(M) + 1, fzero);
  Padic scale = d.one_like();
  const Padic pm = d.one_like().shifted(w.scale_m);
  for (int n = 0; n < W; ++n) {
    const auto term = binoms[static_cast<std::size_t>(n)] * power;
    for (int j = 0; j <= M; ++j) {
      const Padic c = term[j] * scale;
      if (!c.is_zero() && c.valuation() < 0) throw AnalyticityError("family character is not analytic on this disc; raise v or m");
      coeffs[static_cast<std::size_t>(j)][n] = c;
    }
    scale = scale * pm;
  }
  FamilySeries out(std::move(coeffs));
  return out * at_d;
}

/// Ring map s -> value applied coefficient-wise.
inline PadicSeries specialize(const FamilySeries& f, const Padic& s) {
  return f.map([&](const FamilyCoefficient& c) { return c.specialize(s); });
}

}  // namespace qs
