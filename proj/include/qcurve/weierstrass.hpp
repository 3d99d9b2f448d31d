#pragma once

// Short Weierstrass curves y^2 = x^3 + Ax + B over F_{p^2}, affine group law,
// twists and a brute-force point-count oracle for small p.

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcurve/bigfield.hpp"

namespace qcurve {

struct Point {
  bool infinity = true;
  Fp2 x, y;

  static Point at_infinity() { return {}; }
  static Point affine(const Fp2& x, const Fp2& y) { return {false, x, y}; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

  std::string to_string() const {
    return infinity ? std::string("inf") : "(" + x.to_string() + ", " + y.to_string() + ")";
  }
};

/// Coordinate-wise p-power map. Sends a point of E to the conjugate curve.
inline Point frobenius(const Point& P) {
  return P.infinity ? P : Point::affine(P.x.conj(), P.y.conj());
}

class Curve {
 public:
  static Curve create(std::shared_ptr<const FieldCtx> field, const Fp2& A, const Fp2& B) {
    Curve c(std::move(field), A, B);
    if (c.discriminant().is_zero())
      throw DomainError(ErrorKind::SingularCurve, "curve discriminant vanishes");
    return c;
  }
  static Curve create(std::shared_ptr<const FieldCtx> field, long long A, long long B) {
    const FieldCtx& f = *field;
    return create(std::move(field), Fp2::from_int(f, A), Fp2::from_int(f, B));
  }

  const FieldCtx& field() const { return *field_; }
  const std::shared_ptr<const FieldCtx>& field_ptr() const { return field_; }
  const Fp2& A() const { return A_; }
  const Fp2& B() const { return B_; }

  Fp2 rhs(const Fp2& x) const { return (x.square() + A_) * x + B_; }
  Fp2 discriminant() const { return -16 * (4 * A_.square() * A_ + 27 * B_.square()); }

  Fp2 j_invariant() const {
    const Fp2 a3 = 4 * A_.square() * A_;
    return 1728 * a3 / (a3 + 27 * B_.square());
  }

  bool contains(const Point& P) const {
    if (P.infinity) return true;
    if (!P.x.bound() || !P.y.bound() || !P.x.ctx().same_field(*field_)) return false;
    return P.y.square() == rhs(P.x);
  }

  void require(const Point& P) const {
    if (!contains(P)) throw DomainError(ErrorKind::NotOnCurve, "point " + P.to_string() + " is not on the curve");
  }

  Point point(const Fp2& x, const Fp2& y) const {
    Point P = Point::affine(x, y);
    require(P);
    return P;
  }

  /// Curve with conjugated coefficients (A^p, B^p).
  Curve conjugate() const { return Curve(field_, A_.conj(), B_.conj()); }

  /// The image curve (u^4 A, u^6 B) of the isomorphism (x, y) -> (u^2 x, u^3 y).
  Curve scaled(const Fp2& u2) const {
    const Fp2 u4 = u2.square();
    return Curve(field_, u4 * A_, u4 * u2 * B_);
  }

  friend bool operator==(const Curve& a, const Curve& b) { return a.A_ == b.A_ && a.B_ == b.B_; }
  friend bool operator!=(const Curve& a, const Curve& b) { return !(a == b); }

  Point neg(const Point& P) const {
    require(P);
    return neg_unchecked(P);
  }
  Point add(const Point& P, const Point& Q) const {
    require(P);
    require(Q);
    return add_unchecked(P, Q);
  }
  Point dbl(const Point& P) const {
    require(P);
    return dbl_unchecked(P);
  }
  Point sub(const Point& P, const Point& Q) const { return add(P, neg(Q)); }

  /// [m]P by left-to-right double-and-add; negative m negates the result.
  Point mul(const Integer& m, const Point& P) const {
    require(P);
    return mul_unchecked(m, P);
  }

  static Point neg_unchecked(const Point& P) {
    return P.infinity ? P : Point::affine(P.x, -P.y);
  }

  Point add_unchecked(const Point& P, const Point& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    if (P.x == Q.x) {
      if (P.y == Q.y) return dbl_unchecked(P);
      return Point::at_infinity();
    }
    const Fp2 l = (Q.y - P.y) / (Q.x - P.x);
    const Fp2 x3 = l.square() - P.x - Q.x;
    return Point::affine(x3, l * (P.x - x3) - P.y);
  }

  Point dbl_unchecked(const Point& P) const {
    if (P.infinity || P.y.is_zero()) return Point::at_infinity();
    const Fp2 l = (3 * P.x.square() + A_) / (2 * P.y);
    const Fp2 x3 = l.square() - 2 * P.x;
    return Point::affine(x3, l * (P.x - x3) - P.y);
  }

  Point mul_unchecked(const Integer& m, const Point& P) const {
    const Integer k = abs(m);
    Point acc = Point::at_infinity();
    for (int bit = static_cast<int>(bitlength(k)) - 1; bit >= 0; --bit) {
      acc = dbl_unchecked(acc);
      if (boost::multiprecision::bit_test(k, static_cast<unsigned>(bit))) acc = add_unchecked(acc, P);
    }
    return m < 0 ? neg_unchecked(acc) : acc;
  }

 private:
  Curve(std::shared_ptr<const FieldCtx> field, const Fp2& A, const Fp2& B)
      : field_(std::move(field)), A_(A), B_(B) {}

  std::shared_ptr<const FieldCtx> field_;
  Fp2 A_, B_;
};

/// First of sqrt(delta), 1 + sqrt(delta), 2 + sqrt(delta), ... that is a
/// nonsquare in F_{p^2}.
inline Fp2 canonical_nonsquare(const FieldCtx& f) {
  for (long long k = 0;; ++k) {
    const Fp2 mu = Fp2::from_int(f, k, 1);
    if (!is_square(mu)) return mu;
  }
}

struct Twist {
  Curve curve;
  Fp2 mu;
};

/// Quadratic twist (mu^2 A, mu^3 B) by the canonical nonsquare mu.
inline Twist quadratic_twist(const Curve& C) {
  const Fp2 mu = canonical_nonsquare(C.field());
  const Fp2 mu2 = mu.square();
  return {Curve::create(C.field_ptr(), mu2 * C.A(), mu2 * mu * C.B()), mu};
}

inline constexpr int kOracleMaxPrime = 64;

inline void require_oracle_scale(const FieldCtx& f) {
  if (f.p() > kOracleMaxPrime)
    throw DomainError(ErrorKind::OracleGuard,
                      "exhaustive enumeration refused for p = " + f.p().str() + " > " + std::to_string(kOracleMaxPrime));
}

namespace detail {

inline std::size_t index_of(const Fp2& v, u128 p) {
  const FieldCtx& f = v.ctx();
  return static_cast<std::size_t>(f.decode_raw(v.real_raw()) * p + f.decode_raw(v.imag_raw()));
}

inline std::vector<Fp2> all_elements(const FieldCtx& f) {
  const long long p = static_cast<long long>(f.modulus());
  std::vector<Fp2> out;
  out.reserve(static_cast<std::size_t>(p * p));
  for (long long a = 0; a < p; ++a)
    for (long long b = 0; b < p; ++b) out.push_back(Fp2::from_int(f, a, b));
  return out;
}

}  // namespace detail

/// #C(F_{p^2}) by pairing every x with every y. Guarded to p <= 64.
inline Integer oracle_order(const Curve& C) {
  const FieldCtx& f = C.field();
  require_oracle_scale(f);
  const u128 p = f.modulus();
  const auto elems = detail::all_elements(f);
  std::vector<unsigned> ys_with_square(elems.size(), 0);
  for (const Fp2& y : elems) ++ys_with_square[detail::index_of(y.square(), p)];
  Integer count = 1;
  for (const Fp2& x : elems) count += ys_with_square[detail::index_of(C.rhs(x), p)];
  return count;
}

/// Every point of C(F_{p^2}), infinity first. Guarded to p <= 64.
inline std::vector<Point> all_points(const Curve& C) {
  const FieldCtx& f = C.field();
  require_oracle_scale(f);
  std::vector<Point> out{Point::at_infinity()};
  for (const Fp2& x : detail::all_elements(f)) {
    auto y = sqrt(C.rhs(x));
    if (!y) continue;
    out.push_back(Point::affine(x, *y));
    if (!y->is_zero()) out.push_back(Point::affine(x, -*y));
  }
  return out;
}

inline Integer trace_of(const Curve& C, const Integer& order) {
  const Integer& p = C.field().p();
  return p * p + 1 - order;
}

namespace detail {

inline u64 splitmix64(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Integer next_residue(u64& state, const Integer& p) {
  Integer v = splitmix64(state);
  v <<= 64;
  v |= splitmix64(state);
  v <<= 64;
  v |= splitmix64(state);
  return v % p;
}

}  // namespace detail

/// Deterministic affine point: walks x from the seed until x^3 + Ax + B is a
/// square, then takes the canonical root as y.
inline Point random_point(const Curve& C, u64 seed) {
  const FieldCtx& f = C.field();
  u64 state = seed;
  for (;;) {
    const Integer a = detail::next_residue(state, f.p());
    const Integer b = detail::next_residue(state, f.p());
    const Fp2 x = Fp2::from_integers(f, a, b);
    if (auto y = sqrt(C.rhs(x))) return Point::affine(x, *y);
  }
}

}  // namespace qcurve
