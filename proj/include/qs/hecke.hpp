#pragma once

// Automorphic forms L(K, A) = (+)_i A^{Gamma_i} and Hecke operator matrices.
//
// Classical modules are finite-dimensional and exact, so the invariants are
// cut out as kernels and each left coset contributes through one witness.
// Truncated analytic modules are not preserved by the stabilizers, so there
// the operator is assembled on (+)_i A_i with every witness weighted by
// 1/|Gamma_j|. That operator maps into the invariants and agrees with the
// Hecke operator there, hence has the same nonzero spectrum.

#include <qs/cosets.hpp>
#include <qs/modules.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qs {

struct AutomorphicSpace {
  ModuleSpec spec;
  CosetDatum cosets;
  /// Analytic spaces keep the whole truncated module per coset.
  bool averaged = false;
  /// Classical spaces: saturated invariant basis per coset.
  std::vector<SaturatedBasis> invariants;
  std::vector<int> offset;
  int dim = 0;

  int block_dim(int i) const {
    return averaged ? spec.dim() : invariants[static_cast<std::size_t>(i)].dim();
  }
};

inline AutomorphicSpace build_space(const ModuleSpec& spec, const CosetDatum& cd) {
  AutomorphicSpace S;
  S.spec = spec;
  S.cosets = cd;
  S.averaged = spec.kind != ModuleSpec::Kind::Classical;
  const int d = cd.size();
  for (int i = 0; i < d; ++i) {
    S.offset.push_back(S.dim);
    if (S.averaged) {
      S.dim += spec.dim();
      continue;
    }
    const int n = spec.dim();
    const auto& hs = cd.stabilizer_local[static_cast<std::size_t>(i)];
    PadicMatrix stacked = PadicMatrix::zero(n * static_cast<int>(hs.size()), n, spec.scalar(0));
    const PadicMatrix id = PadicMatrix::identity(n, spec.scalar(0));
    for (std::size_t h = 0; h < hs.size(); ++h)
      stacked.set_block(static_cast<int>(h) * n, 0, action_matrix(MonoidElement::make(hs[h]), spec) - id);
    S.invariants.push_back(kernel(stacked, spec.cap - 2));
    S.dim += S.invariants.back().dim();
  }
  return S;
}

/// Monoid element for a witness of the given operator.
inline MonoidElement witness_element(HeckeOp op, const Witness& w) {
  return op == HeckeOp::Up ? MonoidElement::make(w.m, 1, 0) : MonoidElement::make(w.m, 0, 0);
}

namespace detail {

template <Coefficient R>
Matrix<R> averaged_hecke(const AutomorphicSpace& S, const HeckeTable& t, const R& proto,
                         Matrix<R> (*act)(const MonoidElement&, const ModuleSpec&)) {
  Matrix<R> H = Matrix<R>::zero(S.dim, S.dim, proto.zero_like());
  for (int i = 0; i < S.cosets.size(); ++i)
    for (const auto& ws : t.witnesses[static_cast<std::size_t>(i)])
      for (const auto& w : ws) {
        const long order = static_cast<long>(S.cosets.stabilizer[static_cast<std::size_t>(w.j)].size());
        const Padic weight = S.spec.scalar(order).inverse();
        H.add_block(S.offset[static_cast<std::size_t>(i)], S.offset[static_cast<std::size_t>(w.j)],
                    act(witness_element(t.op, w), S.spec) * (proto.one_like() * weight));
      }
  return H;
}

inline PadicMatrix act_padic(const MonoidElement& g, const ModuleSpec& s) { return action_matrix(g, s); }
inline FamilyMatrix act_family(const MonoidElement& g, const ModuleSpec& s) { return action_matrix_family(g, s); }

}  // namespace detail

/// Hecke operator on a classical or analytic space. `seed` permutes the
/// witness search order (the result must not depend on it).
inline PadicMatrix hecke_matrix(const AutomorphicSpace& S, HeckeOp op, long ell, std::optional<std::uint64_t> seed = std::nullopt) {
  if (S.spec.is_family()) throw std::invalid_argument("use hecke_matrix_family on family spaces");
  const HeckeTable t = hecke_table(S.cosets, op, ell, seed);
  if (S.averaged) return detail::averaged_hecke<Padic>(S, t, S.spec.scalar(0), &detail::act_padic);
  PadicMatrix H = PadicMatrix::zero(S.dim, S.dim, S.spec.scalar(0));
  for (int i = 0; i < S.cosets.size(); ++i)
    for (int c = 0; c < t.cosets(); ++c) {
      const BrandtMatch bm = brandt_match(t, S.cosets, i, c);
      const auto& Bi = S.invariants[static_cast<std::size_t>(i)];
      const auto& Bj = S.invariants[static_cast<std::size_t>(bm.j)];
      if (Bi.dim() == 0 || Bj.dim() == 0) continue;
      const PadicMatrix image = action_matrix(witness_element(op, {bm.j, bm.gamma, bm.m}), S.spec) * Bj.basis;
      for (int col = 0; col < Bj.dim(); ++col)
        for (int r = 0; r < Bi.dim(); ++r)
          H(S.offset[static_cast<std::size_t>(i)] + r, S.offset[static_cast<std::size_t>(bm.j)] + col) +=
              image(Bi.pivots[static_cast<std::size_t>(r)], col);
    }
  return H;
}

inline FamilyMatrix hecke_matrix_family(const AutomorphicSpace& S, HeckeOp op, long ell, std::optional<std::uint64_t> seed = std::nullopt) {
  if (!S.spec.is_family()) throw std::invalid_argument("hecke_matrix_family needs a family space");
  const HeckeTable t = hecke_table(S.cosets, op, ell, seed);
  const FamilyCoefficient proto(S.spec.scalar(0), S.spec.kappa.width);
  return detail::averaged_hecke<FamilyCoefficient>(S, t, proto, &detail::act_family);
}

struct CommutationEntry {
  std::string a, b;
  /// Smallest valuation among entries of AB - BA (kInfinitePrecision if exact).
  int min_valuation = kInfinitePrecision;
};

struct NamedOperator {
  std::string name;
  PadicMatrix matrix;
};

inline std::vector<CommutationEntry> commutation_report(const std::vector<NamedOperator>& ops) {
  std::vector<CommutationEntry> out;
  for (std::size_t x = 0; x < ops.size(); ++x)
    for (std::size_t y = x + 1; y < ops.size(); ++y) {
      const auto& A = ops[x].matrix;
      const auto& B = ops[y].matrix;
      out.push_back({ops[x].name, ops[y].name, (A * B - B * A).min_valuation()});
    }
  return out;
}

}  // namespace qs
