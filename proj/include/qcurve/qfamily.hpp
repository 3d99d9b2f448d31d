#pragma once

// The degree 2, 3, 5 and 7 families of reduced quadratic Q-curves, their
// conjugate isogenies and the endomorphisms psi = pi_p o phi.

#include <optional>
#include <vector>

#include "qcurve/isogeny.hpp"

namespace qcurve {

/// Admissibility of (d, p, delta) for a family.
inline void check_family_field(int d, const FieldCtx& f) {
  const Integer& p = f.p();
  if (d != 2 && d != 3 && d != 5 && d != 7)
    throw DomainError(ErrorKind::OutOfRange, "family degree must be one of 2, 3, 5, 7");
  if (p <= d)
    throw DomainError(ErrorKind::OutOfRange, "degree " + std::to_string(d) + " family needs p > " + std::to_string(d));
  if (d == 5) {
    if (p % 4 != 3)
      throw DomainError(ErrorKind::WrongResidueClass, "degree 5 family needs p = 3 (mod 4)");
    if (f.delta() != p - 1) throw DomainError(ErrorKind::DeltaMismatch, "degree 5 family needs delta = -1");
  }
}

/// Sign with psi^2 = [eps * d] pi on the base curve.
inline int epsilon_p(int d, const Integer& p) {
  if (d == 1 || d == 5) return 1;
  const int l = legendre(-d, p);
  if (l == 0) throw DomainError(ErrorKind::OutOfRange, "p divides the degree");
  return -l;
}

struct FamilyCurve {
  int d;
  Integer s;
  Curve curve;
  Fp2 C;  // C_d(s); for d = 5 the factor s(11s - 2)
  Isogeny phi;
  Fp2 lambda2;  // twisting factor applied after the Vélu quotient

  const FieldCtx& field() const { return curve.field(); }
};

namespace detail {

struct FamilyData {
  Fp2 C, A, B;
  KernelSpec kernel;
  std::vector<Fp2> twist_candidates;
};

/// Family data at an arbitrary s in F_{p^2}.
inline FamilyData family_data(int d, const FieldCtx& f, const Fp2& s) {
  const Fp2 one = Fp2::one(f);
  const Fp2 w = s * Fp2::root_delta(f);  // s sqrt(delta)
  switch (d) {
    case 2: {
      const Fp2 C = 9 * (1 + w);
      return {C, 2 * (C - 24), -8 * (C - 16), KernelSpec::two_torsion(Fp2::from_int(f, 4)), {-one / 2}};
    }
    case 3: {
      const Fp2 C = 2 * (1 + w);
      return {C, -3 * (2 * C + 1), C.square() + 10 * C - 2,
              KernelSpec::odd(3, {one, Fp2::from_int(f, -3)}), {-one / 3}};
    }
    case 5: {
      const Fp2 i = Fp2::root_delta(f);
      const Fp2 u = s * (11 * s - 2);
      const Fp2 A = -27 * u * (3 * (6 * s.square() + 6 * s - 1) - 20 * s * (s - 1) * i);
      const Fp2 B = 54 * u.square() * ((13 * s.square() + 59 * s - 9) - 2 * (s - 1) * (20 * s + 9) * i);
      const Fp2 f0 = 1 + 2 * i;
      const Fp2 c = 3 * u * (2 - i);
      const Fp2 f1 = -2 * c * f0;
      const Fp2 f2 = f0 * c.square() + 81 * u * (1 + s * i).square();
      const Fp2 t = 5 / f0;
      return {u, A, B, KernelSpec::odd(5, {f0, f1, f2}), {t.square(), t, f0.square().inv()}};
    }
    case 7: {
      const Fp2 C = 7 * (27 + w.square());
      const Fp2 s2d = w.square();
      const Fp2 A = -3 * C * (85 + 96 * w + 15 * s2d);
      const Fp2 B = 14 * C * (9 * (3 * s2d.square() + 130 * s2d + 171) + 16 * (9 * s2d + 163) * w);
      const Fp2 k = 16 * (1 - w).square() * C;
      const Fp2 f1 = -3 * C;
      const Fp2 f2 = 3 * C.square() - 3 * k;
      const Fp2 f3 = -C.square() * C + 3 * k * C - 4 * k * (1 - w) * (27 + w);
      return {C, A, B, KernelSpec::odd(7, {one, f1, f2, f3}), {-one / 7}};
    }
  }
  throw DomainError(ErrorKind::OutOfRange, "family degree must be one of 2, 3, 5, 7");
}

inline FamilyData family_data(int d, const FieldCtx& f, const Integer& s) {
  return family_data(d, f, Fp2::from_integers(f, s));
}

}  // namespace detail

/// j-invariant of the family member at s in F_{p^2}; nullopt when singular.
inline std::optional<Fp2> family_j(int d, const FieldCtx& f, const Fp2& s) {
  const auto data = detail::family_data(d, f, s);
  const Fp2 a3 = 4 * data.A.square() * data.A;
  const Fp2 disc = a3 + 27 * data.B.square();
  if (disc.is_zero()) return std::nullopt;
  return 1728 * a3 / disc;
}

/// Whether s gives a singular member of the family.
inline bool is_degenerate(int d, const FieldCtx& f, const Integer& s) {
  const auto data = detail::family_data(d, f, mod(s, f.p()));
  return (4 * data.A.square() * data.A + 27 * data.B.square()).is_zero();
}

/// E_{d,delta,s} with phi: E -> E^(p) (the Vélu quotient composed with the
/// twisting isomorphism that lands exactly on the conjugate curve).
inline FamilyCurve build_family_curve(int d, std::shared_ptr<const FieldCtx> field, const Integer& s_in) {
  const FieldCtx& f = *field;
  check_family_field(d, f);
  const Integer s = mod(s_in, f.p());
  auto data = detail::family_data(d, f, s);
  if ((4 * data.A.square() * data.A + 27 * data.B.square()).is_zero())
    throw DomainError(ErrorKind::DegenerateParameter,
                      "s = " + s.str() + " gives a singular curve in the degree " + std::to_string(d) + " family");
  const Curve E = Curve::create(field, data.A, data.B);
  const Isogeny quotient = velu_quotient(E, data.kernel);
  const Curve target = E.conjugate();
  for (const Fp2& l2 : data.twist_candidates) {
    if (!is_square(l2) || quotient.codomain().scaled(l2) != target) continue;
    return {d, s, E, data.C, post_twist(quotient, l2), l2};
  }
  throw DomainError(ErrorKind::NoMatchingTwist, "no twisting factor maps the quotient onto the conjugate curve");
}

/// psi = pi_p o phi on the base curve, or the twisted psi' acting on the
/// canonical quadratic twist without leaving F_{p^2}.
class Endo {
 public:
  static Endo from_family(const FamilyCurve& F, bool twisted = false) {
    return Endo(F.curve, F.phi, F.d, epsilon_p(F.d, F.field().p()), twisted);
  }

  /// GLS case: a curve with coefficients in F_p, phi the identity, d = 1.
  static Endo gls(const Curve& C0, bool twisted = false) {
    if (!C0.A().in_base_field() || !C0.B().in_base_field())
      throw DomainError(ErrorKind::NotSubfieldCurve, "GLS endomorphism needs a curve defined over F_p");
    return Endo(C0, Isogeny::identity(C0), 1, 1, twisted);
  }

  int degree() const { return d_; }
  int eps() const { return eps_; }
  bool twisted() const { return twisted_; }
  /// Sign s with psi^2 = [s * d] pi on the curve psi acts on.
  int sign() const { return twisted_ ? -eps_ : eps_; }
  const Curve& curve() const { return curve_; }
  const Curve& base() const { return base_; }
  const Isogeny& phi() const { return phi_; }
  const Fp2& mu() const { return mu_; }

  Point apply(const Point& P) const {
    curve_.require(P);
    return apply_unchecked(P);
  }

  Point apply_unchecked(const Point& P) const {
    if (P.infinity) return P;
    if (!twisted_) return frobenius(phi_.eval_unchecked(P));
    const Fp2 x = P.x * mu_inv_;
    if (poly::eval(phi_.x_denominator(), x).is_zero()) return Point::at_infinity();
    const Fp2 xx = mu_ * phi_.x_map(x).conj();
    const Fp2 yy = c_ * (P.y * phi_.x_map_derivative(x) * phi_.y_scale()).conj();
    return Point::affine(xx, yy);
  }

 private:
  Endo(const Curve& base, const Isogeny& phi, int d, int eps, bool twisted)
      : base_(base), curve_(base), phi_(phi), d_(d), eps_(eps), twisted_(twisted) {
    const FieldCtx& f = base.field();
    mu_ = canonical_nonsquare(f);
    mu_inv_ = mu_.inv();
    // mu^(3(1 - p)/2): the conjugation defect of mu^(3/2).
    c_ = mu_.pow(3 * (1 - f.p()) / 2);
    if (twisted_) curve_ = quadratic_twist(base).curve;
  }

  Curve base_;
  Curve curve_;
  Isogeny phi_;
  int d_;
  int eps_;
  bool twisted_;
  Fp2 mu_, mu_inv_, c_;
};

/// The p^2-power Frobenius endomorphism, computed coordinate-wise.
inline Point pi_p2(const Point& P) { return frobenius(frobenius(P)); }

struct GroupOrders {
  Integer base;
  Integer twist;
};

/// (p + eps)^2 - eps d r^2 for the base curve and (p - eps)^2 + eps d r^2 for its twist.
inline GroupOrders group_orders(const Integer& p, int eps, int d, const Integer& r) {
  const Integer dr2 = Integer(d) * r * r;
  return {(p + eps) * (p + eps) - eps * dr2, (p - eps) * (p - eps) + eps * dr2};
}

namespace detail {

inline bool satisfies_r(const Endo& E, const Integer& r, const std::vector<Point>& pts) {
  const Curve& C = E.curve();
  const Integer target = E.curve().field().p() + E.sign();
  for (const Point& P : pts)
    if (C.mul_unchecked(r, E.apply_unchecked(P)) != C.mul_unchecked(target, pi_p2(P))) return false;
  return true;
}

inline std::vector<Point> test_points(const Curve& C, int count = 8) {
  if (C.field().p() <= 13) return all_points(C);
  std::vector<Point> pts;
  for (int k = 0; k < count; ++k) pts.push_back(random_point(C, 0x5eed0000u + static_cast<u64>(k)));
  return pts;
}

}  // namespace detail

/// Signed r with d r^2 = 2p + s t and [r]psi = [p] + s pi, where t is the trace
/// of the curve psi acts on and s = E.sign(). Positive sign wins when both
/// signs pass the point test.
inline Integer determine_r(const Endo& E, const Integer& trace) {
  const Integer& p = E.curve().field().p();
  if (abs(trace) > 2 * p) throw DomainError(ErrorKind::TraceInconsistent, "trace violates the Hasse bound");
  const Integer q = 2 * p + E.sign() * trace;
  if (q < 0 || q % E.degree() != 0 || !is_perfect_square(q / E.degree()))
    throw DomainError(ErrorKind::TraceInconsistent, "trace inconsistent with family: (2p + eps t)/d is not a square");
  const Integer r = isqrt(q / E.degree());
  const auto pts = detail::test_points(E.curve());
  if (detail::satisfies_r(E, r, pts)) return r;
  if (r != 0 && detail::satisfies_r(E, -r, pts)) return -r;
  throw DomainError(ErrorKind::SignUndetermined, "neither sign of r satisfies [r]psi = [p] + eps pi");
}

/// Eigenvalue (p + s)/r mod N of psi on a psi-stable subgroup of order N.
inline Integer eigenvalue(const Endo& E, const Integer& r, const Integer& N) {
  if (r == 0) throw DomainError(ErrorKind::Supersingular, "r = 0: supersingular curve has no eigenvalue");
  const Integer p = E.curve().field().p();
  return mod((p + E.sign()) * inverse_mod(r, N), N);
}

}  // namespace qcurve
