#pragma once

// Two-dimensional GLV lattices: explicit reduced bases, Gauss reduction
// under the infinity norm, optimal decomposition and Straus multiexponentiation.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "qcurve/weierstrass.hpp"

namespace qcurve {

struct Vec2 {
  Integer x, y;

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(const Integer& k, const Vec2& a) { return {k * a.x, k * a.y}; }
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

  Integer norm() const { return std::max(abs(x), abs(y)); }
  std::string to_string() const { return "(" + x.str() + "," + y.str() + ")"; }
};

inline Integer det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Exact division of both coordinates; throws when k does not divide.
inline Vec2 divide_exact(const Vec2& v, long long k) {
  if (v.x % k != 0 || v.y % k != 0)
    throw DomainError(ErrorKind::GroupStructureMismatch, "group structure inconsistent with variant");
  return {v.x / k, v.y / k};
}

/// The reduction condition |b1| <= |b2| <= |b1 - b2| <= |b1 + b2| (infinity norm).
inline bool is_reduced(const Vec2& b1, const Vec2& b2) {
  const Integer n1 = b1.norm(), n2 = b2.norm(), nm = (b1 - b2).norm(), np = (b1 + b2).norm();
  return n1 <= n2 && n2 <= nm && nm <= np;
}

enum class BasisVariant { PrimeOrder, Cofactor2D2, Cofactor4D2, Cofactor3D3, Generic };

inline std::string_view to_string(BasisVariant v) {
  switch (v) {
    case BasisVariant::PrimeOrder: return "prime_order";
    case BasisVariant::Cofactor2D2: return "cofactor2_d2";
    case BasisVariant::Cofactor4D2: return "cofactor4_d2";
    case BasisVariant::Cofactor3D3: return "cofactor3_d3";
    case BasisVariant::Generic: return "generic";
  }
  return "unknown";
}

struct GlvBasis {
  Vec2 b1, b2;
  Integer N, lambda;
  BasisVariant variant = BasisVariant::Generic;
  bool reduced_by_gauss = false;  // lemma basis failed the reduction test

  unsigned bitlength() const { return ceil_log2(std::max(b1.norm(), b2.norm())); }
};

struct Decomposition {
  Integer a, b;
  Integer norm() const { return std::max(abs(a), abs(b)); }
};

/// e1 = (p + eps, -r), e2 = (-eps d r, p + eps), generating a sublattice of
/// index #E/N, in the arrangement that is reduced for large p.
inline std::pair<Vec2, Vec2> sublattice_basis(const Integer& p, int eps, int d, const Integer& r) {
  const Vec2 e1{p + eps, -r};
  const Vec2 e2{-Integer(eps) * d * r, p + eps};
  if (eps == -1) return {e1, e2};
  return {r >= 0 ? e1 + e2 : e1 - e2, e1};
}

namespace detail {

/// Integer mu minimising |b - mu a| in the infinity norm.
inline Integer best_multiple(const Vec2& a, const Vec2& b) {
  std::vector<Integer> cands;
  auto push_ratio = [&](const Integer& num, const Integer& den) {
    if (den == 0) return;
    cands.push_back(floor_div(num, den));
    cands.push_back(ceil_div(num, den));
  };
  push_ratio(b.x, a.x);
  push_ratio(b.y, a.y);
  push_ratio(b.x - b.y, a.x - a.y);
  push_ratio(b.x + b.y, a.x + a.y);
  Integer best = 0;
  Integer best_norm = b.norm();
  for (const Integer& mu : cands) {
    const Integer n = (b - mu * a).norm();
    if (n < best_norm) {
      best_norm = n;
      best = mu;
    }
  }
  return best;
}

}  // namespace detail

/// Gauss reduction under the infinity norm; returns a basis of the same
/// lattice satisfying the reduction condition.
inline std::pair<Vec2, Vec2> lagrange_reduce(Vec2 b1, Vec2 b2) {
  if (det(b1, b2) == 0) throw DomainError(ErrorKind::DependentVectors, "lattice vectors are linearly dependent");
  if (b2.norm() < b1.norm()) std::swap(b1, b2);
  for (;;) {
    b2 = b2 - detail::best_multiple(b1, b2) * b1;
    if (b2.norm() < b1.norm()) {
      std::swap(b1, b2);
      continue;
    }
    break;
  }
  if ((b1 - b2).norm() > (b1 + b2).norm()) b2 = -b2;
  return {b1, b2};
}

/// Basis of L = <(N, 0), (-lambda, 1)> from the lemma matching the group
/// structure. sign is the s of psi^2 = [s d] pi (eps_p for psi, -eps_p for
/// the twisted psi').
inline GlvBasis cofactor_basis(BasisVariant variant, const Integer& p, int sign, int d, const Integer& r,
                               const Integer& N, const Integer& lambda) {
  const Vec2 e1{p + sign, -r};
  const Vec2 e2{-Integer(sign) * d * r, p + sign};
  const bool pos = sign * r >= 0;
  Vec2 b1, b2;
  auto mismatch = [] {
    throw DomainError(ErrorKind::GroupStructureMismatch, "group structure inconsistent with variant");
  };
  switch (variant) {
    case BasisVariant::PrimeOrder:
      std::tie(b1, b2) = sublattice_basis(p, sign, d, r);
      break;
    case BasisVariant::Cofactor2D2: {
      if (d != 2 || r % 2 == 0) mismatch();
      const Vec2 h = divide_exact(e2, 2);
      b1 = -h;
      b2 = pos ? e1 + h : e1 - h;
      break;
    }
    case BasisVariant::Cofactor4D2: {
      if (d != 2 || r % 2 != 0) mismatch();
      const Vec2 h1 = divide_exact(e1, 2), h2 = divide_exact(e2, 2);
      if (sign == 1) {
        b1 = r >= 0 ? h1 + h2 : h1 - h2;
        b2 = r >= 0 ? h2 : -h2;
      } else {
        b1 = h1;
        b2 = r >= 0 ? h2 : -h2;
      }
      break;
    }
    case BasisVariant::Cofactor3D3: {
      if (d != 3 || r % 3 == 0) mismatch();
      const Vec2 t = divide_exact(e2, 3);
      b1 = t;
      b2 = pos ? e1 + Integer(2) * t : e1 - Integer(2) * t;
      break;
    }
    case BasisVariant::Generic: {
      std::tie(b1, b2) = lagrange_reduce({N, 0}, {mod(-lambda, N), 1});
      return {b1, b2, N, lambda, variant, true};
    }
  }
  for (const Vec2& v : {b1, b2})
    if (mod(v.x + lambda * v.y, N) != 0) mismatch();
  if (abs(det(b1, b2)) != N) mismatch();
  GlvBasis B{b1, b2, N, lambda, variant, false};
  if (!is_reduced(b1, b2)) {
    std::tie(B.b1, B.b2) = lagrange_reduce(b1, b2);
    B.reduced_by_gauss = true;
  }
  return B;
}

/// Variant implied by the cofactor h = #E / N.
inline BasisVariant select_variant(int d, const Integer& h) {
  if (h == 1) return BasisVariant::PrimeOrder;
  if (d == 2 && h == 2) return BasisVariant::Cofactor2D2;
  if (d == 2 && h == 4) return BasisVariant::Cofactor4D2;
  if (d == 3 && h == 3) return BasisVariant::Cofactor3D3;
  return BasisVariant::Generic;
}

/// Bitlength of the explicit basis for a variant; decompositions stay within it.
inline unsigned lemma_bitlength(BasisVariant variant, const Integer& p, int sign, const Integer& r) {
  switch (variant) {
    case BasisVariant::Cofactor2D2: return ceil_log2(p + sign - abs(r));
    case BasisVariant::Cofactor4D2: return ceil_log2(p + sign) - 1;
    case BasisVariant::Cofactor3D3: return ceil_log2(p + sign - 2 * abs(r));
    default: return ceil_log2(p + sign);
  }
}

/// Decomposition (a, b) of m with a + b lambda = m (mod N) and minimal
/// infinity norm: the closest lattice vector among the four floor/ceil
/// combinations of the exact rational coordinates of (m, 0).
inline Decomposition decompose(const Integer& m, const GlvBasis& B) {
  if (!is_reduced(B.b1, B.b2)) throw DomainError(ErrorKind::NotReduced, "basis does not satisfy the reduction condition");
  const Integer D = det(B.b1, B.b2);
  const Integer an = m * B.b2.y, bn = -m * B.b1.y;
  const std::array<Integer, 2> alphas{floor_div(an, D), ceil_div(an, D)};
  const std::array<Integer, 2> betas{floor_div(bn, D), ceil_div(bn, D)};
  const Vec2 target{m, 0};
  Vec2 best;
  Integer best_norm = -1;
  for (const Integer& a : alphas)
    for (const Integer& b : betas) {
      const Vec2 v = target - (a * B.b1 + b * B.b2);
      const Integer n = v.norm();
      if (best_norm < 0 || n < best_norm) {
        best_norm = n;
        best = v;
      }
    }
  return {best.x, best.y};
}

/// [a]P + [b]Q by Straus' interleaved double-and-add with the table
/// {P, Q, P + Q}; negative scalars negate the base.
inline Point multiexp2(const Integer& a, const Integer& b, const Point& P, const Point& Q, const Curve& C,
                       unsigned* doublings = nullptr) {
  C.require(P);
  C.require(Q);
  const Point Pa = a < 0 ? Curve::neg_unchecked(P) : P;
  const Point Qb = b < 0 ? Curve::neg_unchecked(Q) : Q;
  const Point PQ = C.add_unchecked(Pa, Qb);
  const Integer ua = abs(a), ub = abs(b);
  const unsigned len = std::max(bitlength(ua), bitlength(ub));
  Point acc = Point::at_infinity();
  for (unsigned i = len; i-- > 0;) {
    acc = C.dbl_unchecked(acc);
    const bool ba = boost::multiprecision::bit_test(ua, i), bb = boost::multiprecision::bit_test(ub, i);
    if (ba && bb)
      acc = C.add_unchecked(acc, PQ);
    else if (ba)
      acc = C.add_unchecked(acc, Pa);
    else if (bb)
      acc = C.add_unchecked(acc, Qb);
  }
  if (doublings) *doublings = len;
  return acc;
}

}  // namespace qcurve
