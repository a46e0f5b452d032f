#pragma once

// Truncated power series c_0 + c_1 z + ... + c_D z^D over a coefficient ring
// (Padic or FamilyCoefficient). Products are reduced modulo z^{D+1}.

#include <qs/family.hpp>
#include <qs/padic.hpp>

#include <concepts>
#include <stdexcept>
#include <vector>

namespace qs {

/// What the generic algorithms need from a coefficient ring.
template <class R>
concept Coefficient = requires(R a, R b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a.zero_like() } -> std::convertible_to<R>;
  { a.one_like() } -> std::convertible_to<R>;
  { a.from_int(1L) } -> std::convertible_to<R>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.valuation() } -> std::convertible_to<int>;
  { a.inverse() } -> std::convertible_to<R>;
};

template <Coefficient R>
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(std::vector<R> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  }

  static TruncatedSeries zero(const R& proto, int degree) {
    return TruncatedSeries(std::vector<R>(static_cast<std::size_t>(degree) + 1, proto.zero_like()));
  }
  static TruncatedSeries constant(const R& value, int degree) {
    auto s = zero(value, degree);
    s.c_[0] = value;
    return s;
  }
  /// a + b z
  static TruncatedSeries linear(const R& a, const R& b, int degree) {
    auto s = constant(a, degree);
    if (degree >= 1) s.c_[1] = b;
    return s;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const R& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
  R& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }
  const std::vector<R>& coefficients() const { return c_; }

  TruncatedSeries truncated(int degree) const {
    std::vector<R> c(static_cast<std::size_t>(degree) + 1, c_[0].zero_like());
    for (int i = 0; i <= std::min(degree, this->degree()); ++i) c[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
    return TruncatedSeries(std::move(c));
  }

  TruncatedSeries operator-() const {
    auto r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    same_degree(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    same_degree(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.same_degree(b);
    const int D = a.degree();
    auto r = zero(a.c_[0], D);
    for (int i = 0; i <= D; ++i) {
      if (a[i].is_zero() && a[i].valuation() >= kInfinitePrecision) continue;
      for (int j = 0; i + j <= D; ++j) {
        if (b[j].is_zero() && b[j].valuation() >= kInfinitePrecision) continue;
        r[i + j] += a[i] * b[j];
      }
    }
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const R& s) {
    auto r = a;
    for (auto& x : r.c_) x = x * s;
    return r;
  }

  /// Multiplicative inverse; the constant term must be invertible.
  TruncatedSeries inverse() const {
    const int D = degree();
    auto r = zero(c_[0], D);
    const R inv0 = c_[0].inverse();
    r[0] = inv0;
    for (int n = 1; n <= D; ++n) {
      R acc = c_[0].zero_like();
      for (int i = 1; i <= n; ++i) acc = acc + (*this)[i] * r[n - i];
      r[n] = -(acc * inv0);
    }
    return r;
  }

  TruncatedSeries pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    auto result = constant(c_[0].one_like(), degree());
    auto base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  R evaluate(const R& x) const {
    R acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  template <class F>
  auto map(F&& f) const {
    using Out = decltype(f(c_[0]));
    std::vector<Out> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(f(x));
    return TruncatedSeries<Out>(std::move(out));
  }

 private:
  void same_degree(const TruncatedSeries& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("series truncated at different degrees");
  }

  std::vector<R> c_;
};

/// f(g(z)) truncated at f's degree. Requires g(0) to have positive valuation
/// unless the caller certifies f is a polynomial (its truncation is exact).
template <Coefficient R>
TruncatedSeries<R> compose(const TruncatedSeries<R>& f, const TruncatedSeries<R>& g, bool f_is_polynomial = false) {
  if (!f_is_polynomial && g[0].valuation() < 1)
    throw PrecisionError("compose: inner constant term is not topologically nilpotent and the outer series is not a polynomial");
  const int D = f.degree();
  const auto inner = g.truncated(D);
  auto acc = TruncatedSeries<R>::constant(f[D], D);
  for (int i = D - 1; i >= 0; --i) {
    acc = acc * inner;
    acc[0] = acc[0] + f[i];
  }
  return acc;
}

using PadicSeries = TruncatedSeries<Padic>;
using FamilySeries = TruncatedSeries<FamilyCoefficient>;

}  // namespace qs
