#pragma once

// Montgomery, twisted Edwards and Doche-Icart-Kohel models of the degree 2
// and 3 families, the x-only Montgomery ladder and psi on the (X:Z)-line.

#include <variant>

#include "qcurve/qfamily.hpp"

namespace qcurve {

/// The curve has no model of the requested shape over F_{p^2}; when
/// on_twist is set the model exists for the quadratic twist instead.
struct NotRepresentable {
  bool on_twist = true;
};

template <class M>
using ModelResult = std::variant<M, NotRepresentable>;

/// Short Weierstrass form of y^2 = x^3 + a2 x^2 + a4 x + a6.
inline Curve short_weierstrass(std::shared_ptr<const FieldCtx> field, const Fp2& a2, const Fp2& a4, const Fp2& a6) {
  const Fp2 t = a2 / 3;
  return Curve::create(field, a4 - a2 * t, a6 - a4 * t + 2 * t.square() * t);
}

/// Projective x-coordinate; (1:0) is the point at infinity.
struct XZPoint {
  Fp2 X, Z;

  static XZPoint infinity(const FieldCtx& f) { return {Fp2::one(f), Fp2::zero(f)}; }
  static XZPoint from_x(const Fp2& x) { return {x, Fp2::one(x.ctx())}; }

  bool is_infinity() const { return Z.is_zero(); }
  bool same_as(const XZPoint& o) const { return X * o.Z == o.X * Z; }
  std::string to_string() const { return "(" + X.to_string() + " : " + Z.to_string() + ")"; }
};

struct MontgomeryPoint {
  bool infinity = true;
  Fp2 X, Y;
};

/// B_M Y^2 = X (X^2 + A_M X + 1), reached from E_{2,delta,s} by
/// (x, y) -> ((x - 4)/B_M, y/B_M^2).
class MontgomeryCurve {
 public:
  MontgomeryCurve(const Curve& base, const Fp2& B_M) : base_(base), A_(12 / B_M), B_(B_M), Binv_(B_M.inv()) {
    if (A_.square() == Fp2::from_int(base.field(), 4))
      throw DomainError(ErrorKind::SingularCurve, "Montgomery model with A^2 = 4 is singular");
  }

  const Fp2& A() const { return A_; }
  const Fp2& B() const { return B_; }
  const Curve& base() const { return base_; }
  const FieldCtx& field() const { return base_.field(); }

  bool contains(const MontgomeryPoint& P) const {
    return P.infinity || B_ * P.Y.square() == P.X * (P.X.square() + A_ * P.X + 1);
  }
  bool x_on_curve(const Fp2& X) const { return is_square(X * (X.square() + A_ * X + 1) * Binv_); }

  MontgomeryPoint map(const Point& P) const {
    base_.require(P);
    if (P.infinity) return {};
    return {false, (P.x - 4) * Binv_, P.y * Binv_.square()};
  }
  Point unmap(const MontgomeryPoint& P) const {
    if (!contains(P)) throw DomainError(ErrorKind::NotOnCurve, "point is not on the Montgomery model");
    if (P.infinity) return Point::at_infinity();
    return Point::affine(B_ * P.X + 4, B_.square() * P.Y);
  }
  XZPoint x_line(const Point& P) const {
    const MontgomeryPoint M = map(P);
    return M.infinity ? XZPoint::infinity(field()) : XZPoint::from_x(M.X);
  }

 private:
  Curve base_;
  Fp2 A_, B_, Binv_;
};

/// Montgomery model of E_{2,delta,s}; exists iff 2 C_2(s) is a square.
inline ModelResult<MontgomeryCurve> to_montgomery(const FamilyCurve& F) {
  if (F.d != 2) throw DomainError(ErrorKind::OutOfRange, "Montgomery model is defined for the degree 2 family");
  const auto B = sqrt(2 * F.C);
  if (!B) return NotRepresentable{true};
  return MontgomeryCurve(F.curve, *B);
}

namespace detail {

inline void require_xz(const XZPoint& P, const MontgomeryCurve& M) {
  if (P.X.is_zero() && P.Z.is_zero()) throw DomainError(ErrorKind::InvalidPoint, "(0:0) is not a projective point");
  if (!P.is_infinity() && !M.x_on_curve(P.X / P.Z))
    throw DomainError(ErrorKind::NotOnCurve, "x-coordinate is not on the Montgomery model");
}

inline XZPoint xdbl(const XZPoint& P, const Fp2& a24) {
  const Fp2 s = (P.X + P.Z).square(), d = (P.X - P.Z).square();
  const Fp2 t = s - d;
  return {s * d, t * (d + a24 * t)};
}

inline XZPoint xadd(const XZPoint& P, const XZPoint& Q, const XZPoint& diff) {
  const Fp2 u = (P.X - P.Z) * (Q.X + Q.Z), v = (P.X + P.Z) * (Q.X - Q.Z);
  return {diff.Z * (u + v).square(), diff.X * (u - v).square()};
}

}  // namespace detail

/// x([m]P) by the Montgomery ladder.
inline XZPoint ladder(const Integer& m, const XZPoint& P, const MontgomeryCurve& M) {
  detail::require_xz(P, M);
  const FieldCtx& f = M.field();
  const Integer k = abs(m);
  if (P.is_infinity() || k == 0) return XZPoint::infinity(f);
  // (0, 0) has order 2 and is the one input the differential addition cannot use.
  if (P.X.is_zero()) return k % 2 == 0 ? XZPoint::infinity(f) : P;
  const Fp2 a24 = (M.A() + 2) / 4;
  XZPoint R0 = XZPoint::infinity(f), R1 = P;
  for (unsigned i = bitlength(k); i-- > 0;) {
    if (boost::multiprecision::bit_test(k, i)) {
      R0 = detail::xadd(R0, R1, P);
      R1 = detail::xdbl(R1, a24);
    } else {
      R1 = detail::xadd(R0, R1, P);
      R0 = detail::xdbl(R0, a24);
    }
  }
  return R0;
}

/// psi on the (X:Z)-line:
/// (X^2p + A^p X^p Z^p + Z^2p : -2 A^(p-1) X^p Z^p), scaled by A.
inline XZPoint psi_montgomery(const XZPoint& P, const MontgomeryCurve& M) {
  detail::require_xz(P, M);
  const Fp2 Xp = P.X.conj(), Zp = P.Z.conj(), Ap = M.A().conj();
  const Fp2 XZ = Xp * Zp;
  const XZPoint out{M.A() * (Xp.square() + Ap * XZ + Zp.square()), -2 * Ap * XZ};
  return out.is_infinity() ? XZPoint::infinity(M.field()) : out;
}

struct EdwardsPoint {
  Fp2 x1, x2;
  friend bool operator==(const EdwardsPoint& a, const EdwardsPoint& b) { return a.x1 == b.x1 && a.x2 == b.x2; }
};

/// (12 + 2 B_M) x1^2 + x2^2 = 1 + (12 - 2 B_M) x1^2 x2^2.
class EdwardsCurve {
 public:
  explicit EdwardsCurve(const MontgomeryCurve& M) : M_(M), a_(12 + 2 * M.B()), d_(12 - 2 * M.B()) {
    if (a_ == d_ || a_.is_zero() || d_.is_zero())
      throw DomainError(ErrorKind::SingularCurve, "twisted Edwards coefficients are degenerate");
  }

  const Fp2& a() const { return a_; }
  const Fp2& d() const { return d_; }
  const MontgomeryCurve& montgomery() const { return M_; }

  EdwardsPoint identity() const { return {Fp2::zero(M_.field()), Fp2::one(M_.field())}; }

  bool contains(const EdwardsPoint& P) const {
    const Fp2 s1 = P.x1.square(), s2 = P.x2.square();
    return a_ * s1 + s2 == 1 + d_ * s1 * s2;
  }

  /// (x, y) -> ((x - 4)/y, (x - 4 - B_M)/(x - 4 + B_M)). Infinity goes to
  /// (0, 1) and (4, 0) to (0, -1); the other points of order 2 and the
  /// points with x = 4 - B_M have no affine image.
  EdwardsPoint map(const Point& P) const {
    M_.base().require(P);
    const Fp2 one = Fp2::one(M_.field());
    if (P.infinity) return identity();
    const Fp2 u = P.x - 4;
    if (u.is_zero()) return {Fp2::zero(M_.field()), -one};
    if (P.y.is_zero())
      throw DomainError(ErrorKind::EdwardsPole, "point " + P.to_string() + " of order 2 maps to infinity on the Edwards model");
    if ((u + M_.B()).is_zero())
      throw DomainError(ErrorKind::EdwardsPole, "point " + P.to_string() + " with x = 4 - B_M maps to infinity on the Edwards model");
    return {u / P.y, (u - M_.B()) / (u + M_.B())};
  }

  Point unmap(const EdwardsPoint& P) const {
    if (!contains(P)) throw DomainError(ErrorKind::NotOnCurve, "point is not on the Edwards model");
    const Fp2 one = Fp2::one(M_.field());
    if (P.x1.is_zero()) {
      if (P.x2 == one) return Point::at_infinity();
      return Point::affine(Fp2::from_int(M_.field(), 4), Fp2::zero(M_.field()));
    }
    if (P.x2 == one) throw DomainError(ErrorKind::EdwardsPole, "Edwards point with x2 = 1 has no Weierstrass image");
    const Fp2 u = M_.B() * (1 + P.x2) / (1 - P.x2);
    return Point::affine(u + 4, u / P.x1);
  }

  EdwardsPoint add(const EdwardsPoint& P, const EdwardsPoint& Q) const {
    if (!contains(P) || !contains(Q)) throw DomainError(ErrorKind::NotOnCurve, "point is not on the Edwards model");
    const Fp2 t = d_ * P.x1 * Q.x1 * P.x2 * Q.x2;
    const Fp2 den1 = 1 + t, den2 = 1 - t;
    if (den1.is_zero() || den2.is_zero())
      throw DomainError(ErrorKind::EdwardsPole, "Edwards addition law is undefined for this pair");
    return {(P.x1 * Q.x2 + P.x2 * Q.x1) / den1, (P.x2 * Q.x2 - a_ * P.x1 * Q.x1) / den2};
  }

  EdwardsPoint neg(const EdwardsPoint& P) const { return {-P.x1, P.x2}; }

 private:
  MontgomeryCurve M_;
  Fp2 a_, d_;
};

inline ModelResult<EdwardsCurve> to_edwards(const FamilyCurve& F) {
  const auto M = to_montgomery(F);
  if (const auto* m = std::get_if<MontgomeryCurve>(&M)) return EdwardsCurve(*m);
  return std::get<NotRepresentable>(M);
}

enum class DikVariant { DoublingD2, TriplingD3 };

struct DikPoint {
  bool infinity = true;
  Fp2 u, v;
  friend bool operator==(const DikPoint& a, const DikPoint& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.u == b.u && a.v == b.v;
  }
};

/// v^2 = u (u^2 + D u + 16 D) with D = 1152/C, or v^2 = u^3 + 3 k (u + 1)^2
/// with k = 9/C^p, reached by (x, y) -> (alpha (x - x0), alpha^(3/2) y).
class DikCurve {
 public:
  DikCurve(const Curve& base, DikVariant variant, const Fp2& coeff, const Fp2& alpha, const Fp2& alpha32)
      : base_(base), variant_(variant), coeff_(coeff), alpha_(alpha), alpha32_(alpha32) {}

  DikVariant variant() const { return variant_; }
  const Fp2& coeff() const { return coeff_; }
  const Fp2& alpha() const { return alpha_; }
  const Curve& base() const { return base_; }

  Fp2 rhs(const Fp2& u) const {
    if (variant_ == DikVariant::DoublingD2) return u * (u.square() + coeff_ * u + 16 * coeff_);
    return u.square() * u + 3 * coeff_ * (u + 1).square();
  }
  bool contains(const DikPoint& P) const { return P.infinity || P.v.square() == rhs(P.u); }

  DikPoint map(const Point& P) const {
    base_.require(P);
    if (P.infinity) return {};
    return {false, alpha_ * (P.x - x0()), alpha32_ * P.y};
  }
  Point unmap(const DikPoint& P) const {
    if (!contains(P)) throw DomainError(ErrorKind::NotOnCurve, "point is not on the DIK model");
    if (P.infinity) return Point::at_infinity();
    return Point::affine(P.u / alpha_ + x0(), P.v / alpha32_);
  }

  /// The same curve in short Weierstrass form, u = X - a2/3.
  Curve weierstrass() const;
  Point to_weierstrass(const DikPoint& P) const {
    if (P.infinity) return Point::at_infinity();
    return Point::affine(P.u + a2() / 3, P.v);
  }
  Fp2 a2() const { return variant_ == DikVariant::DoublingD2 ? coeff_ : 3 * coeff_; }

 private:
  long long x0() const { return variant_ == DikVariant::DoublingD2 ? 4 : 3; }

  Curve base_;
  DikVariant variant_;
  Fp2 coeff_, alpha_, alpha32_;
};

namespace detail {

inline Curve dik_weierstrass(std::shared_ptr<const FieldCtx> field, DikVariant variant, const Fp2& coeff) {
  if (variant == DikVariant::DoublingD2) return short_weierstrass(field, coeff, 16 * coeff, Fp2::zero(*field));
  return short_weierstrass(field, 3 * coeff, 6 * coeff, 3 * coeff);
}

inline Fp2 dik_coeff(const FamilyCurve& F, DikVariant variant) {
  const int want = variant == DikVariant::DoublingD2 ? 2 : 3;
  if (F.d != want) throw DomainError(ErrorKind::OutOfRange, "DIK variant does not match the family degree");
  return variant == DikVariant::DoublingD2 ? 1152 / F.C : 9 / F.C.conj();
}

}  // namespace detail

inline Curve DikCurve::weierstrass() const { return detail::dik_weierstrass(base_.field_ptr(), variant_, coeff_); }

/// The DIK equation for F in short Weierstrass form, whether or not it is
/// isomorphic to F over F_{p^2}.
inline Curve dik_equation(const FamilyCurve& F, DikVariant variant) {
  return detail::dik_weierstrass(F.curve.field_ptr(), variant, detail::dik_coeff(F, variant));
}

/// DIK model of E_{2,delta,s} (alpha = 96/C) or E_{3,delta,s} (alpha = 3/C^p).
/// NotRepresentable when alpha is a nonsquare: the model is then the twist.
inline ModelResult<DikCurve> to_dik(const FamilyCurve& F, DikVariant variant) {
  const Fp2 coeff = detail::dik_coeff(F, variant);
  const Fp2 alpha = variant == DikVariant::DoublingD2 ? 96 / F.C : 3 / F.C.conj();
  const auto root = sqrt(alpha);
  if (!root) return NotRepresentable{true};
  return DikCurve(F.curve, variant, coeff, alpha, alpha * *root);
}

}  // namespace qcurve
