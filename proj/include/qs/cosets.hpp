#pragma once

// Double cosets D^x \ G(A_f) / K at Iwahori level for a class-number-one
// order, as unit-group orbits on P^1(F_p), and the left-coset data of the
// Hecke operators U_p, T_l and S_l in the form "block (i, j) receives the
// action of m = g_i^{-1} gamma g_j".

#include <qs/quaternion.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qs {

/// Raised when a coset search fails; never a valid state.
struct InconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

namespace detail {

inline long residue1(const Padic& x) {
  if (!x.is_integral()) throw InconsistencyError("reduction mod p of a non-integral entry");
  return x.residue(1).get_si();
}

inline long inv_mod(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  for (long x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw InconsistencyError("no inverse mod p");
}

/// P^1(F_p) indexing: (x : 1) -> x, (1 : 0) -> p.
inline int point_index(long x, long y, long p) {
  x = ((x % p) + p) % p;
  y = ((y % p) + p) % p;
  if (y != 0) return static_cast<int>(x * inv_mod(y, p) % p);
  if (x == 0) throw InconsistencyError("zero vector has no projective point");
  return static_cast<int>(p);
}

inline std::pair<long, long> point_vector(int idx, long p) {
  if (idx == p) return {1, 0};
  return {idx, 1};
}

struct Residues {
  long a, b, c, d;
};

inline Residues residues(const Mat2& m) { return {residue1(m.a), residue1(m.b), residue1(m.c), residue1(m.d)}; }

inline int apply_point(const Residues& r, int idx, long p) {
  const auto [x, y] = point_vector(idx, p);
  return point_index(r.a * x + r.b * y, r.c * x + r.d * y, p);
}

}  // namespace detail

struct CosetDatum {
  unsigned p = 3;
  int N = 20;
  int splitting_choice = 0;
  /// Representative point P_i of each orbit, its lift g_i (g_i e_1 spans P_i)
  /// and the inverse lift.
  std::vector<int> rep_point;
  std::vector<Mat2> lift;
  std::vector<Mat2> lift_inv;
  /// Gamma_i as global units and as Iwahori matrices g_i^{-1} gamma g_i.
  std::vector<std::vector<QuaternionElement>> stabilizer;
  std::vector<std::vector<Mat2>> stabilizer_local;
  /// Orbit index of every point of P^1(F_p).
  std::vector<int> orbit_of_point;
  std::vector<int> orbit_size;

  int size() const { return static_cast<int>(rep_point.size()); }
  PadicSplitting splitting() const { return PadicSplitting(p, N, splitting_choice); }
};

inline Mat2 point_lift(int idx, unsigned p, int N) {
  if (idx == static_cast<int>(p)) return Mat2::identity(p, N);
  return Mat2::from_ints(p, N, idx, -1, 1, 0);
}

inline CosetDatum double_cosets(const PadicSplitting& split, int splitting_choice = 0) {
  const unsigned p = split.prime();
  const int N = split.precision();
  if (N < 1) throw std::invalid_argument("splitting precision below one digit");
  CosetDatum cd;
  cd.p = p;
  cd.N = N;
  cd.splitting_choice = splitting_choice;
  const auto& units = unit_group();
  std::vector<detail::Residues> unit_res;
  for (const auto& u : units) unit_res.push_back(detail::residues(split.image(u)));
  const int npts = static_cast<int>(p) + 1;
  cd.orbit_of_point.assign(static_cast<std::size_t>(npts), -1);
  for (int pt = 0; pt < npts; ++pt) {
    if (cd.orbit_of_point[static_cast<std::size_t>(pt)] >= 0) continue;
    const int i = cd.size();
    int count = 0;
    for (const auto& r : unit_res) {
      const int q = detail::apply_point(r, pt, p);
      if (cd.orbit_of_point[static_cast<std::size_t>(q)] < 0) {
        cd.orbit_of_point[static_cast<std::size_t>(q)] = i;
        ++count;
      }
    }
    cd.rep_point.push_back(pt);
    cd.orbit_size.push_back(count);
    const Mat2 g = point_lift(pt, p, N);
    cd.lift.push_back(g);
    cd.lift_inv.push_back(g.inverse());
    std::vector<QuaternionElement> stab;
    std::vector<Mat2> stab_local;
    for (std::size_t u = 0; u < units.size(); ++u)
      if (detail::apply_point(unit_res[u], pt, p) == pt) {
        stab.push_back(units[u]);
        const Mat2 h = cd.lift_inv.back() * split.image(units[u]) * g;
        if (!h.in_iwahori()) throw InconsistencyError("stabilizer element is not Iwahori");
        stab_local.push_back(h);
      }
    cd.stabilizer.push_back(std::move(stab));
    cd.stabilizer_local.push_back(std::move(stab_local));
  }
  return cd;
}

enum class HeckeOp { Up, Tl, Sl };

inline std::string op_name(HeckeOp op, long ell) {
  switch (op) {
    case HeckeOp::Up: return "U_" + std::to_string(ell);
    case HeckeOp::Tl: return "T_" + std::to_string(ell);
    case HeckeOp::Sl: return "S_" + std::to_string(ell);
  }
  return "?";
}

/// Left-coset representatives of a Hecke double coset. U_p has the local
/// matrices (p, b; 0, 1); T_l has the norm-l elements grouped into right
/// unit classes; S_l has the single class of the central element l.
struct HeckeCosetList {
  HeckeOp op = HeckeOp::Up;
  long ell = 0;
  std::vector<Mat2> local_reps;
  std::vector<std::vector<QuaternionElement>> classes;
  int count() const { return op == HeckeOp::Up ? static_cast<int>(local_reps.size()) : static_cast<int>(classes.size()); }
};

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

/// Elements of norm n grouped into classes gamma * O^x, in enumeration order.
inline std::vector<std::vector<QuaternionElement>> right_unit_classes(const std::vector<QuaternionElement>& elems) {
  std::vector<std::vector<QuaternionElement>> classes;
  std::map<QuaternionElement, int> cls;
  for (const auto& g : elems) {
    if (cls.count(g)) continue;
    const int id = static_cast<int>(classes.size());
    classes.emplace_back();
    for (const auto& u : unit_group()) {
      const auto gu = g * u;
      if (!cls.count(gu)) {
        cls[gu] = id;
        classes.back().push_back(gu);
      }
    }
  }
  // Keep each class in the global enumeration order.
  for (auto& c : classes) {
    std::vector<QuaternionElement> sorted;
    for (const auto& g : elems)
      if (std::find(c.begin(), c.end(), g) != c.end()) sorted.push_back(g);
    c = std::move(sorted);
  }
  return classes;
}

}  // namespace detail

inline HeckeCosetList hecke_cosets(HeckeOp op, long ell, const PadicSplitting& split) {
  const unsigned p = split.prime();
  const int N = split.precision();
  if (!is_prime(ell)) throw std::invalid_argument("Hecke operators are indexed by primes");
  HeckeCosetList out;
  out.op = op;
  out.ell = ell;
  if (op == HeckeOp::Up) {
    if (ell != static_cast<long>(p)) throw std::invalid_argument("U is only defined at the working prime");
    for (long b = 0; b < static_cast<long>(p); ++b) out.local_reps.push_back(Mat2::from_ints(p, N, static_cast<long>(p), b, 0, 1));
    for (std::size_t x = 0; x < out.local_reps.size(); ++x)
      for (std::size_t y = 0; y < out.local_reps.size(); ++y)
        if (x != y && (out.local_reps[x].inverse() * out.local_reps[y]).in_iwahori())
          throw InconsistencyError("U_p representatives are not distinct modulo the Iwahori");
    return out;
  }
  if (ell == 2 || ell == static_cast<long>(p)) throw std::invalid_argument("T_l and S_l need l prime to 2p");
  if (op == HeckeOp::Tl) {
    out.classes = detail::right_unit_classes(enumerate_by_norm(ell));
    if (static_cast<long>(out.classes.size()) != ell + 1) throw InconsistencyError("wrong number of norm-l classes");
  } else {
    std::vector<QuaternionElement> c;
    for (const auto& u : unit_group()) c.push_back(ell * u);
    out.classes.push_back(std::move(c));
  }
  return out;
}

struct Witness {
  int j = 0;
  QuaternionElement gamma;
  /// g_i^{-1} gamma g_j, the monoid element acting on the coefficients.
  Mat2 m;
};

/// For every source i and every left coset c, all witnesses (j, gamma) with
/// m = g_i^{-1} gamma g_j in the coset. There are |Gamma_j| of them and j is
/// unique; the first one in search order is the canonical choice.
struct HeckeTable {
  HeckeOp op = HeckeOp::Up;
  long ell = 0;
  std::vector<std::vector<std::vector<Witness>>> witnesses;  // [i][coset][w]
  int sources() const { return static_cast<int>(witnesses.size()); }
  int cosets() const { return witnesses.empty() ? 0 : static_cast<int>(witnesses[0].size()); }
};

inline HeckeTable hecke_table(const CosetDatum& cd, HeckeOp op, long ell, std::optional<std::uint64_t> seed = std::nullopt) {
  const PadicSplitting split = cd.splitting();
  const unsigned p = cd.p;
  const long lp = static_cast<long>(p);
  const HeckeCosetList cl = hecke_cosets(op, ell, split);
  HeckeTable t;
  t.op = op;
  t.ell = ell;
  const int d = cd.size();
  std::mt19937_64 rng(seed.value_or(0));
  auto order = [&](std::vector<QuaternionElement> v) {
    if (seed) std::shuffle(v.begin(), v.end(), rng);
    return v;
  };
  auto rep_index = [&](int pt) -> int {
    for (int j = 0; j < d; ++j)
      if (cd.rep_point[static_cast<std::size_t>(j)] == pt) return j;
    return -1;
  };
  t.witnesses.assign(static_cast<std::size_t>(d), std::vector<std::vector<Witness>>(static_cast<std::size_t>(cl.count())));
  if (op == HeckeOp::Up) {
    const auto elems = order(enumerate_by_norm(lp));
    for (const auto& g : elems) {
      const Mat2 gm = split.image(g);
      const auto r = detail::residues(gm);
      const bool top = (r.a % lp) != 0 || (r.b % lp) != 0;
      const int ker = top ? detail::point_index(-r.b, r.a, lp) : detail::point_index(-r.d, r.c, lp);
      const bool left = (r.a % lp) != 0 || (r.c % lp) != 0;
      const int im = left ? detail::point_index(r.a, r.c, lp) : detail::point_index(r.b, r.d, lp);
      const int j = rep_index(ker);
      if (j < 0) continue;
      for (int i = 0; i < d; ++i) {
        if (im == cd.rep_point[static_cast<std::size_t>(i)]) continue;
        const Mat2 m = cd.lift_inv[static_cast<std::size_t>(i)] * gm * cd.lift[static_cast<std::size_t>(j)];
        const long m12 = detail::residue1(m.b), m22 = detail::residue1(m.d);
        if (m22 % lp == 0) throw InconsistencyError("U_p witness with non-unit corner");
        const long b = m12 * detail::inv_mod(m22, lp) % lp;
        const Mat2 kappa = cl.local_reps[static_cast<std::size_t>(b)].inverse() * m;
        if (!kappa.in_iwahori()) throw InconsistencyError("U_p witness outside its coset");
        t.witnesses[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)].push_back({j, g, m});
      }
    }
  } else {
    for (std::size_t c = 0; c < cl.classes.size(); ++c) {
      const auto elems = order(cl.classes[c]);
      for (const auto& g : elems) {
        const Mat2 gm = split.image(g);
        const auto r = detail::residues(gm);
        for (int j = 0; j < d; ++j) {
          const int img = detail::apply_point(r, cd.rep_point[static_cast<std::size_t>(j)], lp);
          const int i = rep_index(img);
          if (i < 0) continue;
          const Mat2 m = cd.lift_inv[static_cast<std::size_t>(i)] * gm * cd.lift[static_cast<std::size_t>(j)];
          if (!m.in_iwahori()) throw InconsistencyError("Hecke witness outside the Iwahori");
          t.witnesses[static_cast<std::size_t>(i)][c].push_back({j, g, m});
        }
      }
    }
  }
  for (int i = 0; i < d; ++i)
    for (const auto& ws : t.witnesses[static_cast<std::size_t>(i)]) {
      if (ws.empty()) throw InconsistencyError("coset search exhausted without a match");
      const int j = ws.front().j;
      for (const auto& w : ws)
        if (w.j != j) throw InconsistencyError("a left coset matched two double cosets");
      if (ws.size() != cd.stabilizer[static_cast<std::size_t>(j)].size())
        throw InconsistencyError("witness count differs from the stabilizer order");
    }
  return t;
}

struct BrandtMatch {
  int j = 0;
  QuaternionElement gamma;
  Mat2 m;
  /// kappa with g_i delta = gamma g_j kappa locally at p.
  Mat2 kappa_local;
};

/// First witness for source i and left coset c.
inline BrandtMatch brandt_match(const HeckeTable& t, const CosetDatum& cd, int i, int c) {
  const auto& ws = t.witnesses.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c));
  if (ws.empty()) throw InconsistencyError("coset search exhausted without a match");
  const Witness& w = ws.front();
  Mat2 delta = Mat2::identity(cd.p, cd.N);
  if (t.op == HeckeOp::Up) delta = Mat2::from_ints(cd.p, cd.N, static_cast<long>(cd.p), c, 0, 1);
  return {w.j, w.gamma, w.m, w.m.inverse() * delta};
}

}  // namespace qs
