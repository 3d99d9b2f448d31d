#pragma once

// Arithmetic in F_p and F_{p^2} = F_p(sqrt(delta)) for primes 3 < p < 2^128.
//
// Residues live in 128-bit words. A generic context keeps them in Montgomery
// form (R = 2^128); the Mersenne prime 2^127 - 1 gets a folding reduction and
// keeps residues canonical. Either way the representation is private to the
// context: Fp2::real()/imag() always return canonical integers in [0, p).

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "qcurve/error.hpp"
#include "qcurve/integer.hpp"

namespace qcurve {

namespace detail {

inline u64 lo64(u128 v) { return static_cast<u64>(v); }
inline u64 hi64(u128 v) { return static_cast<u64>(v >> 64); }

// 128 x 128 -> 256-bit product, little-endian limbs.
inline void mul_wide(u128 a, u128 b, u64 out[4]) {
  const u64 a0 = lo64(a), a1 = hi64(a), b0 = lo64(b), b1 = hi64(b);
  const u128 p00 = static_cast<u128>(a0) * b0;
  const u128 p01 = static_cast<u128>(a0) * b1;
  const u128 p10 = static_cast<u128>(a1) * b0;
  const u128 p11 = static_cast<u128>(a1) * b1;
  out[0] = lo64(p00);
  const u128 mid = static_cast<u128>(hi64(p00)) + lo64(p01) + lo64(p10);
  out[1] = lo64(mid);
  const u128 high = static_cast<u128>(hi64(mid)) + hi64(p01) + hi64(p10) + lo64(p11);
  out[2] = lo64(high);
  out[3] = hi64(high) + hi64(p11);
}

}  // namespace detail

class Fp2;

/// Prime field modulus p together with the quadratic nonresidue delta that
/// defines F_{p^2}. Immutable; share through std::shared_ptr.
class FieldCtx {
 public:
  enum class Reduction { Automatic, Generic };

  static std::shared_ptr<const FieldCtx> create(const Integer& p, const Integer& delta,
                                                Reduction reduction = Reduction::Automatic) {
    return std::shared_ptr<const FieldCtx>(new FieldCtx(p, delta, reduction));
  }

  const Integer& p() const { return p_int_; }
  u128 modulus() const { return p_; }
  /// Canonical delta in [0, p).
  const Integer& delta() const { return delta_int_; }
  bool mersenne() const { return mersenne_; }

  // Residue primitives in the internal representation.

  u128 add(u128 a, u128 b) const {
    const u128 s = a + b;
    return (s < a || s >= p_) ? s - p_ : s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + (p_ - b); }
  u128 neg(u128 a) const { return a == 0 ? 0 : p_ - a; }

  u128 mul(u128 a, u128 b) const {
    u64 t[4];
    detail::mul_wide(a, b, t);
    return mersenne_ ? fold_mersenne(t) : redc(t);
  }

  u128 encode(const Integer& v) const {
    const u128 c = to_u128(mod(v, p_int_));
    return mersenne_ ? c : mont_mul(c, r2_);
  }
  u128 encode(long long v) const {
    const u128 mag = static_cast<u128>(v < 0 ? -(v + 1) : v) + (v < 0 ? 1 : 0);
    u128 c = mag % p_;
    if (v < 0) c = neg(c);
    return mersenne_ ? c : mont_mul(c, r2_);
  }
  u128 decode_raw(u128 r) const { return mersenne_ ? r : mont_mul(r, 1); }
  Integer decode(u128 r) const { return to_integer(decode_raw(r)); }

  u128 zero() const { return 0; }
  u128 one() const { return one_; }
  u128 delta_rep() const { return delta_; }

  u128 pow(u128 x, const Integer& e) const {
    if (e < 0) return pow(inv(x), -e);
    u128 acc = one_;
    for (int bit = static_cast<int>(bitlength(e)) - 1; bit >= 0; --bit) {
      acc = mul(acc, acc);
      if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) acc = mul(acc, x);
    }
    return acc;
  }

  u128 pow(u128 x, u128 e) const {
    u128 acc = one_;
    int top = 127;
    while (top >= 0 && !((e >> top) & 1)) --top;
    for (int bit = top; bit >= 0; --bit) {
      acc = mul(acc, acc);
      if ((e >> bit) & 1) acc = mul(acc, x);
    }
    return acc;
  }

  u128 inv(u128 x) const {
    if (x == 0) throw DomainError(ErrorKind::DivisionByZero, "inverse of zero in F_p");
    return pow(x, p_ - 2);
  }

  /// Legendre symbol of a residue (internal representation).
  int legendre(u128 x) const {
    if (x == 0) return 0;
    return pow(x, (p_ - 1) / 2) == one_ ? 1 : -1;
  }

  std::optional<u128> sqrt(u128 x) const {
    if (x == 0) return u128{0};
    if (legendre(x) != 1) return std::nullopt;
    if (p3mod4_) return pow(x, quarter_);
    // Tonelli–Shanks; delta is a known nonresidue.
    unsigned m = two_adicity_;
    u128 c = pow(delta_, odd_part_);
    u128 t = pow(x, odd_part_);
    u128 r = pow(x, (odd_part_ + 1) / 2);
    while (t != one_) {
      unsigned i = 0;
      for (u128 tt = t; tt != one_; tt = mul(tt, tt)) ++i;
      u128 b = c;
      for (unsigned k = 0; k + i + 1 < m; ++k) b = mul(b, b);
      m = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
    return r;
  }

  bool same_field(const FieldCtx& o) const { return this == &o || (p_ == o.p_ && delta_ == o.delta_ && mersenne_ == o.mersenne_); }

 private:
  FieldCtx(const Integer& p, const Integer& delta, Reduction reduction) : p_int_(p) {
    if (p <= 3 || bitlength(p) > 128)
      throw DomainError(ErrorKind::OutOfRange, "field characteristic must satisfy 3 < p < 2^128");
    if (!is_probable_prime(p, 64))
      throw DomainError(ErrorKind::NotPrime, "field characteristic " + p.str() + " is not prime");
    p_ = to_u128(p);
    mersenne_ = reduction == Reduction::Automatic && p == (Integer(1) << 127) - 1;
    if (!mersenne_) {
      u64 inv = detail::lo64(p_);
      for (int i = 0; i < 6; ++i) inv *= 2 - detail::lo64(p_) * inv;
      pinv_ = ~inv + 1;
      r2_ = to_u128(mod(Integer(1) << 256, p));
    }
    one_ = encode(1LL);
    quarter_ = (p + 1) / 4;
    p3mod4_ = (p % 4) == 3;
    odd_part_ = p - 1;
    two_adicity_ = 0;
    while ((odd_part_ & 1) == 0) {
      odd_part_ >>= 1;
      ++two_adicity_;
    }
    delta_int_ = mod(delta, p);
    delta_ = encode(delta_int_);
    if (legendre(delta_) != -1)
      throw DomainError(ErrorKind::DeltaIsSquare,
                        "delta = " + delta_int_.str() + " is not a nonsquare modulo " + p.str());
  }

  u128 mont_mul(u128 a, u128 b) const {
    u64 t[4];
    detail::mul_wide(a, b, t);
    return redc(t);
  }

  u128 redc(const u64 in[4]) const {
    u64 t[5] = {in[0], in[1], in[2], in[3], 0};
    const u64 pw[2] = {detail::lo64(p_), detail::hi64(p_)};
    for (int i = 0; i < 2; ++i) {
      const u64 m = t[i] * pinv_;
      u128 carry = 0;
      for (int j = 0; j < 2; ++j) {
        const u128 s = static_cast<u128>(m) * pw[j] + t[i + j] + carry;
        t[i + j] = detail::lo64(s);
        carry = s >> 64;
      }
      for (int k = i + 2; k < 5 && carry; ++k) {
        const u128 s = static_cast<u128>(t[k]) + carry;
        t[k] = detail::lo64(s);
        carry = s >> 64;
      }
    }
    const u128 r = (static_cast<u128>(t[3]) << 64) | t[2];
    return (t[4] != 0 || r >= p_) ? r - p_ : r;
  }

  u128 fold_mersenne(const u64 t[4]) const {
    constexpr u128 m = (static_cast<u128>(1) << 127) - 1;
    const u128 low = ((static_cast<u128>(t[1]) << 64) | t[0]) & m;
    const u128 high = (static_cast<u128>(t[3]) << 65) | (static_cast<u128>(t[2]) << 1) | (t[1] >> 63);
    u128 s = low + high;
    s = (s & m) + (s >> 127);
    return s >= m ? s - m : s;
  }

  Integer p_int_;
  Integer delta_int_;
  u128 p_ = 0;
  u128 delta_ = 0;
  u128 one_ = 0;
  u128 r2_ = 0;
  u64 pinv_ = 0;
  bool mersenne_ = false;
  bool p3mod4_ = false;
  Integer quarter_, odd_part_;
  unsigned two_adicity_ = 0;
};

/// Element a + b*sqrt(delta) of F_{p^2}. Holds a non-owning pointer to its
/// context; the context must outlive the element.
class Fp2 {
 public:
  Fp2() = default;

  static Fp2 zero(const FieldCtx& f) { return Fp2(f, 0, 0); }
  static Fp2 one(const FieldCtx& f) { return Fp2(f, f.one(), 0); }
  /// sqrt(delta).
  static Fp2 root_delta(const FieldCtx& f) { return Fp2(f, 0, f.one()); }
  static Fp2 from_integers(const FieldCtx& f, const Integer& a, const Integer& b = 0) {
    return Fp2(f, f.encode(a), f.encode(b));
  }
  static Fp2 from_int(const FieldCtx& f, long long a, long long b = 0) {
    return Fp2(f, f.encode(a), f.encode(b));
  }
  static Fp2 from_raw(const FieldCtx& f, u128 a_rep, u128 b_rep) { return Fp2(f, a_rep, b_rep); }

  const FieldCtx& ctx() const { return *ctx_; }
  bool bound() const { return ctx_ != nullptr; }

  Integer real() const { return ctx_->decode(a_); }
  Integer imag() const { return ctx_->decode(b_); }
  u128 real_raw() const { return a_; }
  u128 imag_raw() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return a_ == ctx_->one() && b_ == 0; }
  bool in_base_field() const { return b_ == 0; }

  Fp2 operator-() const { return Fp2(*ctx_, ctx_->neg(a_), ctx_->neg(b_)); }

  friend Fp2 operator+(const Fp2& x, const Fp2& y) {
    const FieldCtx& f = common(x, y);
    return Fp2(f, f.add(x.a_, y.a_), f.add(x.b_, y.b_));
  }
  friend Fp2 operator-(const Fp2& x, const Fp2& y) {
    const FieldCtx& f = common(x, y);
    return Fp2(f, f.sub(x.a_, y.a_), f.sub(x.b_, y.b_));
  }
  friend Fp2 operator*(const Fp2& x, const Fp2& y) {
    const FieldCtx& f = common(x, y);
    const u128 aa = f.mul(x.a_, y.a_);
    const u128 bb = f.mul(x.b_, y.b_);
    const u128 cross = f.sub(f.sub(f.mul(f.add(x.a_, x.b_), f.add(y.a_, y.b_)), aa), bb);
    return Fp2(f, f.add(aa, f.mul(f.delta_rep(), bb)), cross);
  }
  friend Fp2 operator/(const Fp2& x, const Fp2& y) { return x * y.inv(); }

  friend Fp2 operator+(const Fp2& x, long long c) { return x + from_int(*x.ctx_, c); }
  friend Fp2 operator+(long long c, const Fp2& x) { return x + c; }
  friend Fp2 operator-(const Fp2& x, long long c) { return x - from_int(*x.ctx_, c); }
  friend Fp2 operator-(long long c, const Fp2& x) { return from_int(*x.ctx_, c) - x; }
  friend Fp2 operator*(const Fp2& x, long long c) {
    const u128 k = x.ctx_->encode(c);
    return Fp2(*x.ctx_, x.ctx_->mul(x.a_, k), x.ctx_->mul(x.b_, k));
  }
  friend Fp2 operator*(long long c, const Fp2& x) { return x * c; }
  friend Fp2 operator/(const Fp2& x, long long c) { return x * from_int(*x.ctx_, c).inv(); }
  friend Fp2 operator/(long long c, const Fp2& x) { return from_int(*x.ctx_, c) * x.inv(); }

  Fp2& operator+=(const Fp2& y) { return *this = *this + y; }
  Fp2& operator-=(const Fp2& y) { return *this = *this - y; }
  Fp2& operator*=(const Fp2& y) { return *this = *this * y; }

  friend bool operator==(const Fp2& x, const Fp2& y) {
    common(x, y);
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Fp2& x, const Fp2& y) { return !(x == y); }

  Fp2 square() const { return *this * *this; }

  /// Norm a^2 - delta*b^2 as a residue of F_p (internal representation).
  u128 norm_raw() const {
    const FieldCtx& f = *ctx_;
    return f.sub(f.mul(a_, a_), f.mul(f.delta_rep(), f.mul(b_, b_)));
  }

  Fp2 inv() const {
    if (is_zero()) throw DomainError(ErrorKind::DivisionByZero, "inverse of zero in F_p^2");
    const FieldCtx& f = *ctx_;
    const u128 n = f.inv(norm_raw());
    return Fp2(f, f.mul(a_, n), f.neg(f.mul(b_, n)));
  }

  Fp2 pow(const Integer& e) const {
    if (e < 0) return inv().pow(-e);
    Fp2 acc = one(*ctx_);
    for (int bit = static_cast<int>(bitlength(e)) - 1; bit >= 0; --bit) {
      acc = acc.square();
      if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) acc = acc * *this;
    }
    return acc;
  }

  /// The p-power Frobenius: a + b*sqrt(delta) -> a - b*sqrt(delta).
  Fp2 conj() const { return Fp2(*ctx_, a_, ctx_->neg(b_)); }

  /// "a+b*i" with canonical decimal a, b; i stands for sqrt(delta).
  std::string to_string() const { return real().str() + "+" + imag().str() + "*i"; }

 private:
  Fp2(const FieldCtx& f, u128 a, u128 b) : ctx_(&f), a_(a), b_(b) {}

  static const FieldCtx& common(const Fp2& x, const Fp2& y) {
    if (x.ctx_ != y.ctx_ && (x.ctx_ == nullptr || y.ctx_ == nullptr || !x.ctx_->same_field(*y.ctx_)))
      throw DomainError(ErrorKind::ContextMismatch, "F_p^2 operands from different fields");
    return *x.ctx_;
  }

  const FieldCtx* ctx_ = nullptr;
  u128 a_ = 0;
  u128 b_ = 0;
};

inline Fp2 frobenius(const Fp2& x) { return x.conj(); }

/// Legendre symbol (n/p) for an odd prime p, via Euler's criterion.
inline int legendre(const Integer& n, const Integer& p) {
  if (p < 3 || (p & 1) == 0 || !is_probable_prime(p, 64))
    throw DomainError(ErrorKind::NotPrime, "legendre symbol needs an odd prime modulus");
  const Integer r = powm(n, (p - 1) / 2, p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

inline bool is_square(const Fp2& x) {
  return x.is_zero() || x.ctx().legendre(x.norm_raw()) == 1;
}

/// Square root with the canonical sign: of {r, -r} the one whose (a, b) pair
/// is lexicographically smaller. nullopt when x is not a square in F_{p^2}.
inline std::optional<Fp2> sqrt(const Fp2& x) {
  const FieldCtx& f = x.ctx();
  if (x.is_zero()) return x;
  std::optional<Fp2> root;
  if (x.in_base_field()) {
    if (auto s = f.sqrt(x.real_raw())) {
      root = Fp2::from_raw(f, *s, 0);
    } else {
      // a is a nonresidue, so a/delta is a residue and sqrt(a) = sqrt(a/delta)*sqrt(delta).
      auto t = f.sqrt(f.mul(x.real_raw(), f.inv(f.delta_rep())));
      root = Fp2::from_raw(f, 0, *t);
    }
  } else {
    auto n = f.sqrt(x.norm_raw());
    if (!n) return std::nullopt;
    const u128 half = f.inv(f.add(f.one(), f.one()));
    u128 u2 = f.mul(f.add(x.real_raw(), *n), half);
    auto u = f.sqrt(u2);
    if (!u || *u == 0) {
      u2 = f.mul(f.sub(x.real_raw(), *n), half);
      u = f.sqrt(u2);
    }
    const u128 v = f.mul(x.imag_raw(), f.inv(f.add(*u, *u)));
    root = Fp2::from_raw(f, *u, v);
  }
  Fp2 other = -*root;
  const Integer ra = root->real(), oa = other.real();
  if (oa < ra || (oa == ra && other.imag() < root->imag())) root = other;
  return root;
}

/// Parses "a+b*i", "a-b*i", "a", "b*i" (decimal, optionally signed).
inline Fp2 parse_fp2(const FieldCtx& f, std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw UsageError("empty field element");
  auto parse_coeff = [](std::string_view v) {
    if (v.empty() || v == "+") return Integer(1);
    if (v == "-") return Integer(-1);
    return parse_integer(v);
  };
  const bool has_i = s.size() >= 1 && s.back() == 'i';
  if (!has_i) return Fp2::from_integers(f, parse_integer(s), 0);
  std::string body = s.substr(0, s.size() - 1);
  if (!body.empty() && body.back() == '*') body.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  if (split == std::string::npos) return Fp2::from_integers(f, 0, parse_coeff(body));
  return Fp2::from_integers(f, parse_integer(body.substr(0, split)), parse_coeff(body.substr(split)));
}

}  // namespace qcurve
