#pragma once

// Bounded-precision p-adic numbers.
//
// A Padic is stored as p^val * unit with the unit known modulo p^rel
// (capped relative precision). The absolute precision val + rel is what the
// public API reports; arithmetic never claims more precision than its inputs
// carry. Zero is "zero to absolute precision A", or exact zero (A = infinity).

#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qs {

/// Raised when a computation needs more p-adic digits than are available.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kInfinitePrecision = INT_MAX / 4;

namespace detail {

/// p^k, cached per thread.
inline const mpz_class& pow_p(unsigned p, int k) {
  thread_local std::unordered_map<unsigned, std::vector<mpz_class>> cache;
  thread_local unsigned last_p = 0;
  thread_local std::vector<mpz_class>* last = nullptr;
  if (p != last_p) {
    last = &cache[p];
    last_p = p;
  }
  auto& v = *last;
  if (v.empty()) v.emplace_back(1);
  while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * p);
  return v[static_cast<std::size_t>(k)];
}

}  // namespace detail

class Padic {
 public:
  Padic() = default;

  /// Integer n known to relative precision `cap` (n is exact, so the cap is
  /// the only limit).
  Padic(unsigned p, int cap, const mpz_class& n) : p_(p), cap_(cap) { set_integer(n); }
  Padic(unsigned p, int cap, long n) : Padic(p, cap, mpz_class(n)) {}

  static Padic zero(unsigned p, int cap, int absprec = kInfinitePrecision) {
    Padic z;
    z.p_ = p;
    z.cap_ = cap;
    z.val_ = absprec;
    z.rel_ = 0;
    return z;
  }
  static Padic one(unsigned p, int cap) { return Padic(p, cap, 1L); }
  /// p^k (k may be negative).
  static Padic p_power(unsigned p, int cap, int k) {
    Padic x = one(p, cap);
    x.val_ = k;
    return x;
  }
  /// Residue r taken modulo p^absprec, i.e. an integer known to absolute
  /// precision `absprec`.
  static Padic from_residue(unsigned p, int absprec, const mpz_class& r) {
    Padic x(p, absprec, r);
    return x.with_absprec(absprec);
  }
  /// Rational a/b.
  static Padic rational(unsigned p, int cap, const mpz_class& a, const mpz_class& b) {
    return Padic(p, cap, a) / Padic(p, cap, b);
  }

  unsigned prime() const { return p_; }
  int cap() const { return cap_; }
  bool is_zero() const { return rel_ == 0; }
  bool is_exact_zero() const { return rel_ == 0 && val_ >= kInfinitePrecision; }
  /// Exact valuation when nonzero, otherwise the absolute precision ("at least").
  int valuation() const { return val_; }
  int absprec() const { return is_zero() ? val_ : val_ + rel_; }
  int relprec() const { return rel_; }
  bool is_unit() const { return !is_zero() && val_ == 0; }
  bool is_integral() const { return val_ >= 0; }
  const mpz_class& unit_part() const { return unit_; }

  Padic zero_like() const { return zero(p_, cap_); }
  Padic one_like() const { return one(p_, cap_); }
  Padic from_int(long n) const { return Padic(p_, cap_, n); }

  /// Drop digits beyond absolute precision A.
  Padic with_absprec(int A) const {
    if (A >= absprec()) return *this;
    Padic r = *this;
    if (is_zero() || A <= val_) return zero(p_, cap_, A);
    r.rel_ = A - val_;
    r.unit_ %= detail::pow_p(p_, r.rel_);
    return r;
  }

  /// Integer representative modulo p^N; requires integrality.
  mpz_class residue(int N) const {
    if (is_zero() || val_ >= N) return 0;
    if (val_ < 0) throw PrecisionError("residue of a non-integral p-adic number");
    mpz_class r = unit_ * detail::pow_p(p_, val_);
    r %= detail::pow_p(p_, N);
    return r;
  }

  Padic operator-() const {
    Padic r = *this;
    if (!is_zero()) {
      r.unit_ = detail::pow_p(p_, rel_) - unit_;
    }
    return r;
  }

  Padic& operator+=(const Padic& o) { return *this = add(*this, o); }
  Padic& operator-=(const Padic& o) { return *this = add(*this, -o); }
  Padic& operator*=(const Padic& o) { return *this = mul(*this, o); }
  Padic& operator/=(const Padic& o) { return *this = mul(*this, o.inverse()); }

  friend Padic operator+(const Padic& a, const Padic& b) { return add(a, b); }
  friend Padic operator-(const Padic& a, const Padic& b) { return add(a, -b); }
  friend Padic operator*(const Padic& a, const Padic& b) { return mul(a, b); }
  friend Padic operator/(const Padic& a, const Padic& b) { return mul(a, b.inverse()); }

  Padic inverse() const {
    if (is_zero()) throw PrecisionError("division by a p-adic zero");
    Padic r = *this;
    r.val_ = -val_;
    mpz_invert(r.unit_.get_mpz_t(), unit_.get_mpz_t(), detail::pow_p(p_, rel_).get_mpz_t());
    return r;
  }

  /// Multiply by p^k exactly.
  Padic shifted(int k) const {
    Padic r = *this;
    if (!r.is_exact_zero()) r.val_ += k;
    return r;
  }

  Padic pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Padic result = one_like();
    Padic base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  /// True when a and b agree to at least `digits` absolute digits (and are
  /// both known that far).
  friend bool agree(const Padic& a, const Padic& b, int digits) {
    return (a - b).valuation() >= digits;
  }

  /// Exact equality of representations (value, valuation and precision).
  friend bool operator==(const Padic& a, const Padic& b) {
    return a.p_ == b.p_ && a.val_ == b.val_ && a.rel_ == b.rel_ && a.unit_ == b.unit_;
  }

  /// Base-p digits of the unit part, most significant first, padded to the
  /// relative precision.
  std::string unit_digits() const {
    if (is_zero()) return "";
    std::string s = unit_.get_str(static_cast<int>(p_));
    if (static_cast<int>(s.size()) < rel_) s.insert(0, static_cast<std::size_t>(rel_) - s.size(), '0');
    return s;
  }

  static Padic from_digits(unsigned p, int cap, int valuation, const std::string& digits, int absprec) {
    if (digits.empty()) return zero(p, cap, absprec);
    Padic x;
    x.p_ = p;
    x.cap_ = cap;
    x.val_ = valuation;
    x.rel_ = absprec - valuation;
    if (x.rel_ != static_cast<int>(digits.size()))
      throw std::invalid_argument("digit string length does not match precision");
    x.unit_ = mpz_class(digits, static_cast<int>(p));
    if (mpz_divisible_ui_p(x.unit_.get_mpz_t(), p)) throw std::invalid_argument("unit part divisible by p");
    return x;
  }

  std::string to_string() const {
    if (is_exact_zero()) return "0";
    if (is_zero()) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    return unit_.get_str() + "*" + std::to_string(p_) + "^" + std::to_string(val_) + " + O(" +
           std::to_string(p_) + "^" + std::to_string(absprec()) + ")";
  }

 private:
  void set_integer(mpz_class n) {
    if (n == 0) {
      val_ = kInfinitePrecision;
      rel_ = 0;
      unit_ = 0;
      return;
    }
    mpz_class t;
    val_ = static_cast<int>(mpz_remove(t.get_mpz_t(), n.get_mpz_t(), mpz_class(p_).get_mpz_t()));
    rel_ = cap_;
    const mpz_class& m = detail::pow_p(p_, rel_);
    mpz_fdiv_r(unit_.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
  }

  static Padic add(const Padic& a, const Padic& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("mixed primes in p-adic arithmetic");
    const int cap = std::min(a.cap_, b.cap_);
    const int abs = std::min(a.absprec(), b.absprec());
    if (a.is_zero() && b.is_zero()) return zero(a.p_, cap, abs);
    if (a.is_zero()) return b.with_absprec(abs).recap(cap);
    if (b.is_zero()) return a.with_absprec(abs).recap(cap);
    const Padic& lo = a.val_ <= b.val_ ? a : b;
    const Padic& hi = a.val_ <= b.val_ ? b : a;
    const int v = lo.val_;
    const int r = abs - v;
    if (r <= 0) return zero(a.p_, cap, abs);
    Padic out;
    out.p_ = a.p_;
    out.cap_ = cap;
    mpz_class s = hi.unit_ * detail::pow_p(a.p_, hi.val_ - v);
    s += lo.unit_;
    const mpz_class& mod = detail::pow_p(a.p_, r);
    mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), mod.get_mpz_t());
    if (hi.val_ != v) {
      out.val_ = v;
      out.rel_ = r;
      out.unit_ = std::move(s);
      return out.recap(cap);
    }
    if (s == 0) return zero(a.p_, cap, abs);
    int k = 0;
    while (mpz_divisible_ui_p(s.get_mpz_t(), a.p_)) {
      mpz_divexact_ui(s.get_mpz_t(), s.get_mpz_t(), a.p_);
      ++k;
    }
    out.val_ = v + k;
    out.rel_ = r - k;
    out.unit_ = std::move(s);
    return out.recap(cap);
  }

  static Padic mul(const Padic& a, const Padic& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("mixed primes in p-adic arithmetic");
    const int cap = std::min(a.cap_, b.cap_);
    if (a.is_zero() || b.is_zero()) {
      long abs;
      if (a.is_zero() && b.is_zero())
        abs = static_cast<long>(a.val_) + b.val_;
      else if (a.is_zero())
        abs = static_cast<long>(a.val_) + b.val_;
      else
        abs = static_cast<long>(b.val_) + a.val_;
      abs = std::min<long>(abs, kInfinitePrecision);
      return zero(a.p_, cap, static_cast<int>(abs));
    }
    Padic out;
    out.p_ = a.p_;
    out.cap_ = cap;
    out.val_ = a.val_ + b.val_;
    out.rel_ = std::min(a.rel_, b.rel_);
    mpz_mul(out.unit_.get_mpz_t(), a.unit_.get_mpz_t(), b.unit_.get_mpz_t());
    mpz_fdiv_r(out.unit_.get_mpz_t(), out.unit_.get_mpz_t(), detail::pow_p(a.p_, out.rel_).get_mpz_t());
    return out;
  }

  Padic recap(int cap) const {
    if (is_zero() || rel_ <= cap) return *this;
    Padic r = *this;
    r.rel_ = cap;
    r.unit_ %= detail::pow_p(p_, cap);
    return r;
  }

  unsigned p_ = 3;
  int cap_ = 20;
  int val_ = kInfinitePrecision;
  int rel_ = 0;
  mpz_class unit_ = 0;
};

/// Exact p-adic valuation of a nonzero integer.
inline int valuation_of(const mpz_class& n, unsigned p) {
  if (n == 0) return kInfinitePrecision;
  mpz_class t;
  return static_cast<int>(mpz_remove(t.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

inline int valuation_of_factorial(long n, unsigned p) {
  int v = 0;
  for (long q = p; q <= n; q *= p) v += static_cast<int>(n / q);
  return v;
}

}  // namespace qs
