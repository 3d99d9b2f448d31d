#pragma once

// From a family member and its trace to the data a GLV implementation needs:
// r, both group orders, the prime subgroup, the eigenvalue and a reduced basis.

#include "qcurve/glv.hpp"
#include "qcurve/qfamily.hpp"

namespace qcurve {

struct GlvSetup {
  Endo psi;
  Integer trace;        // trace of the curve psi acts on
  Integer r;
  Integer order;        // #E for the curve psi acts on
  Integer other_order;  // its quadratic twist
  Integer N, cofactor;
  Integer lambda;
  GlvBasis basis;

  const Curve& curve() const { return psi.curve(); }
};

/// Trace of the family curve from the brute-force point count (small p only).
inline Integer oracle_trace(const FamilyCurve& F) { return trace_of(F.curve, oracle_order(F.curve)); }

/// base_trace is the trace of F.curve; twisted selects psi' on the twist.
inline GlvSetup glv_setup(const FamilyCurve& F, const Integer& base_trace, bool twisted = false) {
  const Integer& p = F.field().p();
  const Endo psi = Endo::from_family(F, twisted);
  const Integer t = twisted ? Integer(-base_trace) : base_trace;
  const Integer r = determine_r(psi, t);
  const Integer q1 = p * p + 1;
  const Integer order = q1 - t, other = q1 + t;
  if (r == 0) throw DomainError(ErrorKind::Supersingular, "r = 0: supersingular curve has no GLV lattice");
  const Factorization fac = factor_small(order);
  if (fac.remainder != 1 && !fac.remainder_prime)
    throw DomainError(ErrorKind::GroupStructureMismatch, "group order has a composite part above the trial bound");
  const Integer N = fac.largest_prime_factor();
  const Integer h = order / N;
  if (N <= 3 || h % N == 0 || r % N == 0)
    throw DomainError(ErrorKind::GroupStructureMismatch,
                      "largest prime factor " + N.str() + " is not a psi-stable cyclic subgroup");
  const Integer lambda = eigenvalue(psi, r, N);
  const GlvBasis basis = cofactor_basis(select_variant(F.d, h), p, psi.sign(), F.d, r, N, lambda);
  return {psi, t, r, order, other, N, h, lambda, basis};
}

/// A point of order N: the cofactor multiple of a seeded random point.
inline Point subgroup_point(const GlvSetup& S, u64 seed) {
  for (u64 k = 0;; ++k) {
    const Point P = S.curve().mul(S.cofactor, random_point(S.curve(), seed + k));
    if (!P.infinity) return P;
  }
}

}  // namespace qcurve
