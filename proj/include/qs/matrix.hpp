#pragma once

// Dense matrices over a coefficient ring, characteristic series det(1 - X A),
// and kernels over the p-adic integers with saturated (echelon) bases.

#include <qs/series.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace qs {

template <Coefficient R>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const R& fill)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  static Matrix zero(int rows, int cols, const R& proto) { return Matrix(rows, cols, proto.zero_like()); }
  static Matrix identity(int n, const R& proto) {
    Matrix m = zero(n, n, proto);
    for (int i = 0; i < n; ++i) m(i, i) = proto.one_like();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  R& operator()(int r, int c) { return a_[idx(r, c)]; }
  const R& operator()(int r, int c) const { return a_[idx(r, c)]; }
  const R& proto() const { return a_.front(); }

  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix b = zero(nr, nc, proto());
    for (int r = 0; r < nr; ++r)
      for (int c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }
  void add_block(int r0, int c0, const Matrix& b) {
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) += b(r, c);
  }

  Matrix transpose() const {
    Matrix t = zero(cols_, rows_, proto());
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const R& s) {
    Matrix r = a;
    for (auto& x : r.a_) x = x * s;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not compose");
    Matrix r = zero(a.rows_, b.cols_, a.proto());
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const R& x = a(i, k);
        if (x.is_zero() && x.valuation() >= kInfinitePrecision) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const R& y = b(k, j);
          if (y.is_zero() && y.valuation() >= kInfinitePrecision) continue;
          r(i, j) += x * y;
        }
      }
    return r;
  }

  std::vector<R> apply(const std::vector<R>& v) const {
    std::vector<R> out(static_cast<std::size_t>(rows_), proto().zero_like());
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) out[static_cast<std::size_t>(i)] += (*this)(i, k) * v[static_cast<std::size_t>(k)];
    return out;
  }

  template <class F>
  auto map(F&& f) const {
    using Out = decltype(f(a_[0]));
    Matrix<Out> out(rows_, cols_, f(a_[0]));
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(r, c) = f((*this)(r, c));
    return out;
  }

  /// Smallest entry valuation (kInfinitePrecision for an exact zero matrix).
  int min_valuation() const {
    int v = kInfinitePrecision;
    for (const auto& x : a_) v = std::min(v, x.valuation());
    return v;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("matrix shapes differ");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<R> a_;
};

using PadicMatrix = Matrix<Padic>;
using FamilyMatrix = Matrix<FamilyCoefficient>;

/// det(1 - X A) as coefficients c_0 = 1, c_1, ..., c_n, by Berkowitz's
/// division-free algorithm. Works over any commutative coefficient ring.
template <Coefficient R>
std::vector<R> char_series_berkowitz(const Matrix<R>& A) {
  const int n = A.rows();
  if (n != A.cols()) throw std::invalid_argument("characteristic series of a non-square matrix");
  if (n == 0) return {};
  const R zero = A.proto().zero_like();
  const R one = A.proto().one_like();
  std::vector<R> poly{one, -A(0, 0)};
  for (int i = 1; i < n; ++i) {
    // Column of the lower-triangular Toeplitz matrix: 1, -a, -R C, -R S C, ...
    std::vector<R> col;
    col.reserve(static_cast<std::size_t>(i) + 2);
    col.push_back(one);
    col.push_back(-A(i, i));
    std::vector<R> v(static_cast<std::size_t>(i), zero);
    for (int r = 0; r < i; ++r) v[static_cast<std::size_t>(r)] = A(r, i);
    for (int k = 0; k < i; ++k) {
      R rc = zero;
      for (int r = 0; r < i; ++r) rc += A(i, r) * v[static_cast<std::size_t>(r)];
      col.push_back(-rc);
      if (k + 1 < i) {
        std::vector<R> w(static_cast<std::size_t>(i), zero);
        for (int r = 0; r < i; ++r)
          for (int c = 0; c < i; ++c) {
            const R& x = A(r, c);
            if (x.is_zero() && x.valuation() >= kInfinitePrecision) continue;
            w[static_cast<std::size_t>(r)] += x * v[static_cast<std::size_t>(c)];
          }
        v = std::move(w);
      }
    }
    std::vector<R> next(static_cast<std::size_t>(i) + 2, zero);
    for (std::size_t r = 0; r < next.size(); ++r)
      for (std::size_t c = 0; c < poly.size() && c <= r; ++c) next[r] += col[r - c] * poly[c];
    poly = std::move(next);
  }
  return poly;
}

/// det(1 - X A) via similarity reduction to Hessenberg form with
/// minimal-valuation pivoting (multipliers stay integral), then the
/// Hessenberg recurrence. O(n^3); p-adic matrices only.
inline std::vector<Padic> char_series_hessenberg(PadicMatrix H) {
  const int n = H.rows();
  if (n != H.cols()) throw std::invalid_argument("characteristic series of a non-square matrix");
  if (n == 0) return {};
  for (int m = 1; m < n - 1; ++m) {
    int piv = -1;
    int best = kInfinitePrecision;
    for (int i = m; i < n; ++i) {
      const Padic& x = H(i, m - 1);
      if (!x.is_zero() && x.valuation() < best) {
        best = x.valuation();
        piv = i;
      }
    }
    if (piv < 0) continue;
    if (piv != m) {
      for (int j = 0; j < n; ++j) std::swap(H(piv, j), H(m, j));
      for (int i = 0; i < n; ++i) std::swap(H(i, piv), H(i, m));
    }
    const Padic inv = H(m, m - 1).inverse();
    for (int i = m + 1; i < n; ++i) {
      if (H(i, m - 1).is_zero()) continue;
      const Padic u = H(i, m - 1) * inv;
      for (int j = 0; j < n; ++j) H(i, j) -= u * H(m, j);
      for (int j = 0; j < n; ++j) H(j, m) += u * H(j, i);
    }
  }
  // det(1 - X H_k) recurrence in the reversed variable.
  const Padic zero = H.proto().zero_like();
  const Padic one = H.proto().one_like();
  std::vector<std::vector<Padic>> q(static_cast<std::size_t>(n) + 1);
  q[0] = {one};
  for (int k = 1; k <= n; ++k) {
    std::vector<Padic> cur(static_cast<std::size_t>(k) + 1, zero);
    const auto& prev = q[static_cast<std::size_t>(k) - 1];
    // (1 - X h_kk) q_{k-1}
    for (std::size_t d = 0; d < prev.size(); ++d) {
      cur[d] += prev[d];
      cur[d + 1] -= H(k - 1, k - 1) * prev[d];
    }
    Padic prod = one;
    for (int i = k - 1; i >= 1; --i) {
      prod = prod * H(i, i - 1);
      const Padic t = H(i - 1, k - 1) * prod;
      if (t.is_zero() && t.valuation() >= kInfinitePrecision) continue;
      const auto& qi = q[static_cast<std::size_t>(i) - 1];
      const int shift = k - i + 1;
      for (std::size_t d = 0; d < qi.size(); ++d) cur[d + static_cast<std::size_t>(shift)] -= t * qi[d];
    }
    q[static_cast<std::size_t>(k)] = std::move(cur);
  }
  return q[static_cast<std::size_t>(n)];
}

/// A saturated basis of a kernel, in reduced form: column c has a 1 in row
/// pivots[c] and 0 in every other pivot row, so coordinates of a vector in
/// the span are read off at the pivot rows.
struct SaturatedBasis {
  PadicMatrix basis;  // n x r
  std::vector<int> pivots;
  int dim() const { return static_cast<int>(pivots.size()); }
};

/// Make the columns of B (over Q_p) into a saturated Z_p-basis of
/// span(B) ∩ Z_p^n.
inline SaturatedBasis saturate_columns(PadicMatrix B) {
  const int n = B.rows();
  const int r = B.cols();
  SaturatedBasis out;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int t = 0; t < r; ++t) {
    int v = kInfinitePrecision;
    for (int i = 0; i < n; ++i)
      if (!B(i, t).is_zero()) v = std::min(v, B(i, t).valuation());
    if (v >= kInfinitePrecision) throw PrecisionError("saturation: basis vector vanished to precision");
    for (int i = 0; i < n; ++i) B(i, t) = B(i, t).shifted(-v);
    int row = -1;
    for (int i = 0; i < n && row < 0; ++i)
      if (!used[static_cast<std::size_t>(i)] && !B(i, t).is_zero() && B(i, t).valuation() == 0) row = i;
    if (row < 0) throw PrecisionError("saturation: no unit pivot available");
    used[static_cast<std::size_t>(row)] = true;
    const Padic inv = B(row, t).inverse();
    for (int i = 0; i < n; ++i) B(i, t) = B(i, t) * inv;
    for (int c = 0; c < r; ++c) {
      if (c == t || B(row, c).is_zero()) continue;
      const Padic f = B(row, c);
      for (int i = 0; i < n; ++i) B(i, c) -= f * B(i, t);
    }
    out.pivots.push_back(row);
  }
  out.basis = std::move(B);
  return out;
}

/// Kernel of A over Q_p, returned as a saturated integral basis. Entries of
/// valuation >= zero_valuation (or zero to precision) count as zero.
inline SaturatedBasis kernel(const PadicMatrix& A, int zero_valuation = kInfinitePrecision) {
  const int m = A.rows();
  const int n = A.cols();
  PadicMatrix E = A;
  std::vector<int> col_of_row;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  int rank = 0;
  for (; rank < std::min(m, n); ++rank) {
    int br = -1, bc = -1, best = zero_valuation;
    for (int i = rank; i < m; ++i)
      for (int j = rank; j < n; ++j) {
        const Padic& x = E(i, j);
        if (!x.is_zero() && x.valuation() < best) {
          best = x.valuation();
          br = i;
          bc = j;
        }
      }
    if (br < 0) break;
    for (int j = 0; j < n; ++j) std::swap(E(rank, j), E(br, j));
    for (int i = 0; i < m; ++i) std::swap(E(i, rank), E(i, bc));
    std::swap(perm[static_cast<std::size_t>(rank)], perm[static_cast<std::size_t>(bc)]);
    const Padic inv = E(rank, rank).inverse();
    for (int j = 0; j < n; ++j) E(rank, j) = E(rank, j) * inv;
    for (int i = 0; i < m; ++i) {
      if (i == rank || E(i, rank).is_zero()) continue;
      const Padic f = E(i, rank);
      for (int j = 0; j < n; ++j) E(i, j) -= f * E(rank, j);
    }
  }
  const Padic proto = A.proto();
  PadicMatrix K = PadicMatrix::zero(n, n - rank, proto);
  for (int f = rank; f < n; ++f) {
    const int c = f - rank;
    K(perm[static_cast<std::size_t>(f)], c) = proto.one_like();
    for (int r = 0; r < rank; ++r) K(perm[static_cast<std::size_t>(r)], c) = -E(r, f);
  }
  if (K.cols() == 0) return SaturatedBasis{K, {}};
  return saturate_columns(std::move(K));
}

/// Coordinates of a vector lying in span(basis): read at the pivot rows.
inline std::vector<Padic> coordinates(const SaturatedBasis& B, const std::vector<Padic>& v) {
  std::vector<Padic> c;
  c.reserve(B.pivots.size());
  for (int r : B.pivots) c.push_back(v[static_cast<std::size_t>(r)]);
  return c;
}

}  // namespace qs
