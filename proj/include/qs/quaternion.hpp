#pragma once

// The rational quaternion algebra ramified at 2 and infinity
// (i^2 = j^2 = -1, ij = k = -ji), its Hurwitz maximal order, and a splitting
// of the order over Z_p for odd p.

#include <qs/padic.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qs {

/// (A + B i + C j + D k) / 2 with A, B, C, D integers of equal parity when
/// the element lies in the Hurwitz order. Arbitrary parities represent other
/// elements with denominators dividing 2.
class QuaternionElement {
 public:
  QuaternionElement() = default;
  /// From doubled coordinates.
  static QuaternionElement doubled(long A, long B, long C, long D) {
    QuaternionElement q;
    q.x_ = {A, B, C, D};
    return q;
  }
  static QuaternionElement integer(long a, long b, long c, long d) { return doubled(2 * a, 2 * b, 2 * c, 2 * d); }

  const std::array<long, 4>& doubled_coords() const { return x_; }

  /// Reduced norm a^2+b^2+c^2+d^2; integral on the order.
  long norm() const {
    const long s = x_[0] * x_[0] + x_[1] * x_[1] + x_[2] * x_[2] + x_[3] * x_[3];
    if (s % 4 != 0) throw std::domain_error("norm of a non-integral quaternion");
    return s / 4;
  }
  /// Reduced trace 2a.
  long trace() const { return x_[0]; }
  bool in_order() const {
    const long par = x_[0] & 1;
    for (long v : x_)
      if ((v & 1) != par) return false;
    return true;
  }

  QuaternionElement conjugate() const { return doubled(x_[0], -x_[1], -x_[2], -x_[3]); }
  QuaternionElement operator-() const { return doubled(-x_[0], -x_[1], -x_[2], -x_[3]); }
  friend QuaternionElement operator+(const QuaternionElement& p, const QuaternionElement& q) {
    return doubled(p.x_[0] + q.x_[0], p.x_[1] + q.x_[1], p.x_[2] + q.x_[2], p.x_[3] + q.x_[3]);
  }
  friend QuaternionElement operator*(const QuaternionElement& p, const QuaternionElement& q) {
    const auto& [a1, b1, c1, d1] = p.x_;
    const auto& [a2, b2, c2, d2] = q.x_;
    // Hamilton product on doubled coordinates yields 4 * (pq); halve once.
    const long A = a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2;
    const long B = a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2;
    const long C = a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2;
    const long D = a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2;
    if (A % 2 || B % 2 || C % 2 || D % 2) throw std::domain_error("quaternion product left the half-integers");
    return doubled(A / 2, B / 2, C / 2, D / 2);
  }
  friend QuaternionElement operator*(long s, const QuaternionElement& q) {
    return doubled(s * q.x_[0], s * q.x_[1], s * q.x_[2], s * q.x_[3]);
  }
  friend bool operator==(const QuaternionElement& p, const QuaternionElement& q) { return p.x_ == q.x_; }
  friend bool operator<(const QuaternionElement& p, const QuaternionElement& q) { return p.x_ < q.x_; }

  std::string to_string() const {
    return "(" + std::to_string(x_[0]) + " + " + std::to_string(x_[1]) + "i + " + std::to_string(x_[2]) + "j + " +
           std::to_string(x_[3]) + "k)/2";
  }

 private:
  std::array<long, 4> x_{0, 0, 0, 0};
};

/// All Hurwitz-order elements of reduced norm n, in a fixed order.
inline std::vector<QuaternionElement> enumerate_by_norm(long n) {
  if (n < 1) throw std::invalid_argument("enumerate_by_norm needs n >= 1");
  const long bound = static_cast<long>(std::floor(2.0 * std::sqrt(static_cast<double>(n)))) + 1;
  const long target = 4 * n;
  std::vector<QuaternionElement> out;
  for (long A = -bound; A <= bound; ++A)
    for (long B = -bound; B <= bound; ++B) {
      if (((A ^ B) & 1) != 0) continue;
      const long ab = A * A + B * B;
      if (ab > target) continue;
      for (long C = -bound; C <= bound; ++C) {
        if (((A ^ C) & 1) != 0) continue;
        const long abc = ab + C * C;
        if (abc > target) continue;
        const long rest = target - abc;
        const long D = std::lround(std::sqrt(static_cast<double>(rest)));
        for (long s : {D, -D}) {
          if (s * s != rest || ((A ^ s) & 1) != 0) continue;
          out.push_back(QuaternionElement::doubled(A, B, C, s));
          if (s == 0) break;
        }
      }
    }
  return out;
}

/// The maximal order Z<1, i, j, (1+i+j+k)/2> and its 24 units.
struct MaximalOrder {
  static QuaternionElement one() { return QuaternionElement::integer(1, 0, 0, 0); }
  static QuaternionElement i() { return QuaternionElement::integer(0, 1, 0, 0); }
  static QuaternionElement j() { return QuaternionElement::integer(0, 0, 1, 0); }
  static QuaternionElement k() { return QuaternionElement::integer(0, 0, 0, 1); }
  static QuaternionElement omega() { return QuaternionElement::doubled(1, 1, 1, 1); }
  static std::array<QuaternionElement, 4> basis() { return {one(), i(), j(), omega()}; }
  static long discriminant() { return 2; }

  static const std::vector<QuaternionElement>& units() {
    static const std::vector<QuaternionElement> u = enumerate_by_norm(1);
    return u;
  }
  static bool contains(const QuaternionElement& q) { return q.in_order(); }
};

inline const std::vector<QuaternionElement>& unit_group() { return MaximalOrder::units(); }

/// 2x2 matrix over Q_p.
struct Mat2 {
  Padic a, b, c, d;

  static Mat2 identity(unsigned p, int cap) { return {Padic::one(p, cap), Padic::zero(p, cap), Padic::zero(p, cap), Padic::one(p, cap)}; }
  static Mat2 from_ints(unsigned p, int cap, long a, long b, long c, long d) {
    return {Padic(p, cap, a), Padic(p, cap, b), Padic(p, cap, c), Padic(p, cap, d)};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Mat2 operator*(const Padic& s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  Padic det() const { return a * d - b * c; }
  Padic trace() const { return a + d; }
  Mat2 inverse() const {
    const Padic di = det().inverse();
    return {d * di, -b * di, -c * di, a * di};
  }
  bool is_integral() const { return a.is_integral() && b.is_integral() && c.is_integral() && d.is_integral(); }
  /// Integral with lower-left entry divisible by p and unit determinant.
  bool in_iwahori() const {
    return is_integral() && (c.is_zero() || c.valuation() >= 1) && det().is_unit();
  }
  /// Agreement to `digits` absolute digits entrywise.
  friend bool agree(const Mat2& x, const Mat2& y, int digits) {
    return agree(x.a, y.a, digits) && agree(x.b, y.b, digits) && agree(x.c, y.c, digits) && agree(x.d, y.d, digits);
  }
  std::string to_string() const {
    return "[[" + a.to_string() + ", " + b.to_string() + "], [" + c.to_string() + ", " + d.to_string() + "]]";
  }
};

/// O ⊗ Z_p ≅ M_2(Z_p): i -> [[0,-1],[1,0]], j -> [[r,t],[t,-r]] with
/// r^2 + t^2 = -1.
class PadicSplitting {
 public:
  /// `choice` selects among the solutions (r, t) mod p, so that independent
  /// splittings can be compared.
  PadicSplitting(unsigned p, int N, int choice = 0) : p_(p), N_(N) {
    if (p % 2 == 0) throw std::invalid_argument("the order is ramified at 2");
    if (N < 1) throw std::invalid_argument("splitting precision must be at least one digit");
    std::vector<std::pair<long, long>> sols;
    for (long r = 0; r < static_cast<long>(p); ++r)
      for (long t = 0; t < static_cast<long>(p); ++t)
        if ((r * r + t * t + 1) % static_cast<long>(p) == 0) sols.emplace_back(r, t);
    const auto [r0, t0] = sols[static_cast<std::size_t>(choice) % sols.size()];
    Padic r(p, N, r0), t(p, N, t0);
    const Padic one = Padic::one(p, N);
    // Newton on whichever coordinate is a unit.
    const bool lift_r = r0 % static_cast<long>(p) != 0;
    for (int it = 0; it < 2 * N + 4; ++it) {
      const Padic f = r * r + t * t + one;
      if (f.is_zero() || f.valuation() >= N) break;
      if (lift_r)
        r -= f / (r + r);
      else
        t -= f / (t + t);
    }
    r_ = r.with_absprec(N);
    t_ = t.with_absprec(N);
    const Padic z = Padic::zero(p, N);
    i_ = {z, -one, one, z};
    j_ = {r_, t_, t_, -r_};
    k_ = i_ * j_;
    half_ = Padic::rational(p, N, 1, 2);
  }

  unsigned prime() const { return p_; }
  int precision() const { return N_; }
  const Padic& r() const { return r_; }
  const Padic& t() const { return t_; }

  Mat2 image(const QuaternionElement& q) const {
    const auto& x = q.doubled_coords();
    const Padic A(p_, N_, x[0]), B(p_, N_, x[1]), C(p_, N_, x[2]), D(p_, N_, x[3]);
    const Mat2 id = Mat2::identity(p_, N_);
    Mat2 m = (A * id) + (B * i_) + (C * j_) + (D * k_);
    return half_ * m;
  }

 private:
  unsigned p_;
  int N_;
  Padic r_, t_, half_;
  Mat2 i_, j_, k_;
};

inline PadicSplitting split_at_p(unsigned p, int N, int choice = 0) { return PadicSplitting(p, N, choice); }

}  // namespace qs
