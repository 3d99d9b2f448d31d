#pragma once

// Vélu quotients by rational subgroups of order 2, 3, 5 and 7.

#include <optional>
#include <vector>

#include "qcurve/weierstrass.hpp"

namespace qcurve {

/// Dense polynomial over F_{p^2}, coefficient i multiplies x^i.
using Poly = std::vector<Fp2>;

namespace poly {

inline void trim(Poly& a) {
  while (a.size() > 1 && a.back().is_zero()) a.pop_back();
}

inline Fp2 eval(const Poly& a, const Fp2& x) {
  Fp2 acc = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * x + a[i];
  return acc;
}

inline Poly add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), Fp2::zero(b.front().ctx()));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

inline Poly scale(Poly a, const Fp2& c) {
  for (auto& v : a) v *= c;
  trim(a);
  return a;
}

inline Poly sub(const Poly& a, const Poly& b) { return add(a, scale(b, -Fp2::one(b.front().ctx()))); }

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Fp2::zero(a.front().ctx()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline Poly derivative(const Poly& a) {
  if (a.size() == 1) return {Fp2::zero(a.front().ctx())};
  Poly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * static_cast<long long>(i));
  trim(out);
  return out;
}

inline bool is_zero(const Poly& a) { return a.size() == 1 && a.front().is_zero(); }

/// Remainder of a modulo b (b nonzero).
inline Poly rem(Poly a, const Poly& b) {
  trim(a);
  const Fp2 lead_inv = b.back().inv();
  while (a.size() >= b.size() && !is_zero(a)) {
    const Fp2 q = a.back() * lead_inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace poly

/// Subgroup description: a rational 2-torsion x-coordinate, or the kernel
/// polynomial F(x) = f0 x^e + f1 x^(e-1) + ... + fe for odd degree 2e + 1.
struct KernelSpec {
  enum class Kind { TwoTorsionPoint, OddKernelPoly };

  Kind kind = Kind::TwoTorsionPoint;
  int degree = 2;
  Fp2 alpha;
  std::vector<Fp2> f;

  static KernelSpec two_torsion(const Fp2& alpha) { return {Kind::TwoTorsionPoint, 2, alpha, {}}; }
  static KernelSpec odd(int degree, std::vector<Fp2> coeffs) {
    return {Kind::OddKernelPoly, degree, Fp2(), std::move(coeffs)};
  }

  /// F as a Poly in ascending order.
  Poly polynomial() const {
    if (kind == Kind::TwoTorsionPoint) return {-alpha, Fp2::one(alpha.ctx())};
    return Poly(f.rbegin(), f.rend());
  }
};

namespace detail {

/// Odd division polynomials psi_3, psi_5, psi_7 as polynomials in x.
inline Poly division_polynomial(const Curve& C, int n) {
  const FieldCtx& f = C.field();
  const Fp2 A = C.A(), B = C.B();
  const Fp2 z = Fp2::zero(f), one = Fp2::one(f);
  const Poly g{B, A, z, one};
  const Poly psi3{-A.square(), 12 * B, 6 * A, z, 3 * one};
  if (n == 3) return psi3;
  const Poly f4{-8 * B.square() - A.square() * A, -4 * A * B, -5 * A.square(), 20 * B, 5 * A, z, one};
  const Poly g2 = poly::mul(g, g);
  const Poly psi3_cubed = poly::mul(poly::mul(psi3, psi3), psi3);
  const Poly psi5 = poly::sub(poly::scale(poly::mul(g2, f4), Fp2::from_int(f, 32)), psi3_cubed);
  if (n == 5) return psi5;
  if (n == 7) {
    const Poly f4_cubed = poly::mul(poly::mul(f4, f4), f4);
    return poly::sub(poly::mul(psi5, psi3_cubed), poly::scale(poly::mul(g2, f4_cubed), Fp2::from_int(f, 128)));
  }
  throw DomainError(ErrorKind::InvalidKernel, "unsupported isogeny degree " + std::to_string(n));
}

}  // namespace detail

class Isogeny {
 public:
  Isogeny(Curve domain, Curve codomain, int degree, Poly num, Poly den, Fp2 y_scale)
      : domain_(std::move(domain)),
        codomain_(std::move(codomain)),
        degree_(degree),
        num_(std::move(num)),
        den_(std::move(den)),
        dnum_(poly::derivative(num_)),
        dden_(poly::derivative(den_)),
        y_scale_(y_scale) {}

  /// The identity map, as a degree-1 isogeny.
  static Isogeny identity(const Curve& C) {
    const FieldCtx& f = C.field();
    return Isogeny(C, C, 1, {Fp2::zero(f), Fp2::one(f)}, {Fp2::one(f)}, Fp2::one(f));
  }

  const Curve& domain() const { return domain_; }
  const Curve& codomain() const { return codomain_; }
  int degree() const { return degree_; }
  const Poly& x_numerator() const { return num_; }
  const Poly& x_denominator() const { return den_; }
  const Fp2& y_scale() const { return y_scale_; }

  Point eval(const Point& P) const {
    domain_.require(P);
    return eval_unchecked(P);
  }

  Point eval_unchecked(const Point& P) const {
    if (P.infinity) return P;
    const Fp2 D = poly::eval(den_, P.x);
    if (D.is_zero()) return Point::at_infinity();
    const Fp2 N = poly::eval(num_, P.x);
    const Fp2 Dinv = D.inv();
    const Fp2 slope = (poly::eval(dnum_, P.x) * D - N * poly::eval(dden_, P.x)) * Dinv.square();
    return Point::affine(N * Dinv, P.y * slope * y_scale_);
  }

  /// x-coordinate map and its derivative at x (x not a pole).
  Fp2 x_map(const Fp2& x) const { return poly::eval(num_, x) / poly::eval(den_, x); }
  Fp2 x_map_derivative(const Fp2& x) const {
    const Fp2 D = poly::eval(den_, x);
    return (poly::eval(dnum_, x) * D - poly::eval(num_, x) * poly::eval(dden_, x)) / D.square();
  }

 private:
  Curve domain_;
  Curve codomain_;
  int degree_;
  Poly num_, den_, dnum_, dden_;
  Fp2 y_scale_;
};

/// Codomain coefficients of the normalized quotient.
inline std::pair<Fp2, Fp2> velu_codomain(const Curve& C, const KernelSpec& K) {
  const Fp2& A = C.A();
  const Fp2& B = C.B();
  if (K.kind == KernelSpec::Kind::TwoTorsionPoint) {
    const Fp2& a = K.alpha;
    return {-4 * A - 15 * a.square(), B - 7 * a * (3 * a.square() + A)};
  }
  const FieldCtx& f = C.field();
  const long long e = static_cast<long long>(K.f.size()) - 1;
  auto coeff = [&](std::size_t i) { return i < K.f.size() ? K.f[i] : Fp2::zero(f); };
  const Fp2 f0inv = coeff(0).inv();
  const Fp2 r1 = coeff(1) * f0inv, r2 = coeff(2) * f0inv, r3 = coeff(3) * f0inv;
  const Fp2 AS = (1 - 10 * e) * A - 30 * r1.square() + 60 * r2;
  const Fp2 BS = (1 - 28 * e) * B + 42 * A * r1 + 70 * r1.square() * r1 - 210 * r1 * r2 + 210 * r3;
  return {AS, BS};
}

/// Checks that K describes a rational subgroup of the right order on C.
inline void validate_kernel(const Curve& C, const KernelSpec& K) {
  if (K.kind == KernelSpec::Kind::TwoTorsionPoint) {
    if (K.degree != 2 || !C.rhs(K.alpha).is_zero())
      throw DomainError(ErrorKind::InvalidKernel, "alpha is not the x-coordinate of a 2-torsion point");
    return;
  }
  if (K.degree != 3 && K.degree != 5 && K.degree != 7)
    throw DomainError(ErrorKind::InvalidKernel, "odd kernel degree must be 3, 5 or 7");
  if (static_cast<int>(K.f.size()) != (K.degree - 1) / 2 + 1 || K.f.front().is_zero())
    throw DomainError(ErrorKind::InvalidKernel, "kernel polynomial has the wrong degree");
  const Poly F = K.polynomial();
  if (!poly::is_zero(poly::rem(detail::division_polynomial(C, K.degree), F)))
    throw DomainError(ErrorKind::InvalidKernel, "kernel polynomial does not divide the division polynomial");
}

/// Normalized quotient isogeny C -> C/K.
inline Isogeny velu_quotient(const Curve& C, const KernelSpec& K) {
  validate_kernel(C, K);
  const FieldCtx& f = C.field();
  const auto [AS, BS] = velu_codomain(C, K);
  const Fp2 one = Fp2::one(f), zero = Fp2::zero(f);
  Poly num, den;
  if (K.kind == KernelSpec::Kind::TwoTorsionPoint) {
    // x + (3a^2 + A)/(x - a)
    const Fp2& a = K.alpha;
    den = {-a, one};
    num = poly::add(poly::mul({zero, one}, den), {3 * a.square() + C.A()});
  } else {
    const long long e = static_cast<long long>(K.f.size()) - 1;
    const Poly F = K.polynomial();
    const Poly dF = poly::derivative(F), ddF = poly::derivative(dF);
    const Poly g{C.B(), C.A(), zero, one};
    const Poly dg = poly::derivative(g);
    const Fp2 r1 = K.f[1] / K.f[0];
    den = poly::mul(F, F);
    const Poly lin{2 * r1, Fp2::from_int(f, 2 * e + 1)};
    num = poly::mul(lin, den);
    num = poly::sub(num, poly::scale(poly::mul(g, poly::sub(poly::mul(ddF, F), poly::mul(dF, dF))), Fp2::from_int(f, 4)));
    num = poly::sub(num, poly::scale(poly::mul(dg, poly::mul(dF, F)), Fp2::from_int(f, 2)));
  }
  Isogeny iso(C, Curve::create(C.field_ptr(), AS, BS), K.degree, num, den, one);
  if (f.p() <= kOracleMaxPrime) {
    for (const Point& P : all_points(C))
      if (!iso.codomain().contains(iso.eval_unchecked(P)))
        throw DomainError(ErrorKind::InvalidKernel, "kernel does not define a subgroup");
  }
  return iso;
}

/// xi_lambda o I where xi_lambda: (x, y) -> (lambda^2 x, lambda^3 y) and
/// lambda is the canonical square root of lambda2.
inline Isogeny post_twist(const Isogeny& I, const Fp2& lambda2) {
  const auto lambda = sqrt(lambda2);
  if (!lambda)
    throw DomainError(ErrorKind::NonRationalTwist, "twisting factor " + lambda2.to_string() + " is not a square");
  return Isogeny(I.domain(), I.codomain().scaled(lambda2), I.degree(), poly::scale(I.x_numerator(), lambda2),
                 I.x_denominator(), I.y_scale() * *lambda);
}

}  // namespace qcurve
