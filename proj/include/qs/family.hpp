#pragma once

// Coefficients over a weight disc: polynomials in the disc coordinate s,
// reduced modulo s^W. This is the finite model of the affinoid algebra of a
// one-parameter weight family.

#include <qs/padic.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qs {

class FamilyCoefficient {
 public:
  FamilyCoefficient() = default;
  FamilyCoefficient(const Padic& constant, int width) : c_(static_cast<std::size_t>(width), constant.zero_like()) {
    if (width < 1) throw std::invalid_argument("family truncation order must be positive");
    c_[0] = constant;
  }
  explicit FamilyCoefficient(std::vector<Padic> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("family truncation order must be positive");
  }

  /// The coordinate s itself.
  static FamilyCoefficient variable(const Padic& proto, int width) {
    FamilyCoefficient x(proto.zero_like(), width);
    if (width > 1) x.c_[1] = proto.one_like();
    return x;
  }

  int width() const { return static_cast<int>(c_.size()); }
  unsigned prime() const { return c_[0].prime(); }
  const Padic& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
  Padic& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }
  const std::vector<Padic>& coefficients() const { return c_; }

  FamilyCoefficient zero_like() const { return FamilyCoefficient(c_[0].zero_like(), width()); }
  FamilyCoefficient one_like() const { return FamilyCoefficient(c_[0].one_like(), width()); }
  FamilyCoefficient from_int(long n) const { return FamilyCoefficient(c_[0].from_int(n), width()); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Padic& x) { return x.is_zero(); });
  }
  /// Minimum coefficient valuation (Gauss valuation in s).
  int valuation() const {
    int v = kInfinitePrecision;
    for (const auto& x : c_) v = std::min(v, x.valuation());
    return v;
  }
  int absprec() const {
    int v = kInfinitePrecision;
    for (const auto& x : c_) v = std::min(v, x.absprec());
    return v;
  }

  FamilyCoefficient with_absprec(int A) const {
    FamilyCoefficient r = *this;
    for (auto& x : r.c_) x = x.with_absprec(A);
    return r;
  }

  FamilyCoefficient operator-() const {
    FamilyCoefficient r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  FamilyCoefficient& operator+=(const FamilyCoefficient& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FamilyCoefficient& operator-=(const FamilyCoefficient& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  FamilyCoefficient& operator*=(const FamilyCoefficient& o) { return *this = *this * o; }

  friend FamilyCoefficient operator+(FamilyCoefficient a, const FamilyCoefficient& b) { return a += b; }
  friend FamilyCoefficient operator-(FamilyCoefficient a, const FamilyCoefficient& b) { return a -= b; }
  friend FamilyCoefficient operator*(const FamilyCoefficient& a, const FamilyCoefficient& b) {
    a.check(b);
    const std::size_t w = a.c_.size();
    FamilyCoefficient r = a.zero_like();
    for (std::size_t i = 0; i < w; ++i) {
      if (a.c_[i].is_exact_zero()) continue;
      for (std::size_t j = 0; i + j < w; ++j) {
        if (b.c_[j].is_exact_zero()) continue;
        r.c_[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }
  friend FamilyCoefficient operator*(const FamilyCoefficient& a, const Padic& b) {
    FamilyCoefficient r = a;
    for (auto& x : r.c_) x *= b;
    return r;
  }

  /// Inverse in Q_p[s]/(s^W); needs a nonzero constant term.
  FamilyCoefficient inverse() const {
    if (c_[0].is_zero()) throw PrecisionError("family coefficient with zero constant term is not invertible");
    const std::size_t w = c_.size();
    FamilyCoefficient r = zero_like();
    const Padic inv0 = c_[0].inverse();
    r.c_[0] = inv0;
    for (std::size_t n = 1; n < w; ++n) {
      Padic acc = c_[0].zero_like();
      for (std::size_t i = 1; i <= n; ++i) acc += c_[i] * r.c_[n - i];
      r.c_[n] = -acc * inv0;
    }
    return r;
  }
  friend FamilyCoefficient operator/(const FamilyCoefficient& a, const FamilyCoefficient& b) { return a * b.inverse(); }

  /// Ring map s -> value.
  Padic specialize(const Padic& s) const {
    Padic acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * s + c_[i];
    return acc;
  }

  friend bool operator==(const FamilyCoefficient& a, const FamilyCoefficient& b) { return a.c_ == b.c_; }

 private:
  void check(const FamilyCoefficient& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("family coefficients of different widths");
  }

  std::vector<Padic> c_;
};

}  // namespace qs
