#pragma once

// Signed multiprecision integers and the number-theoretic helpers shared by
// the curve, lattice and reporting code.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcurve/error.hpp"

namespace qcurve {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline Integer to_integer(u128 v) {
  Integer r = static_cast<u64>(v >> 64);
  r <<= 64;
  r |= static_cast<u64>(v);
  return r;
}

inline u128 to_u128(const Integer& v) {
  if (v < 0 || v >= (Integer(1) << 128))
    throw DomainError(ErrorKind::OutOfRange, "integer does not fit in 128 bits");
  if (v == 0) return 0;
  const u64 lo = static_cast<u64>(v & Integer(~u64{0}));
  const u64 hi = static_cast<u64>(v >> 64);
  return (static_cast<u128>(hi) << 64) | lo;
}

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw UsageError("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw UsageError("malformed integer literal '" + s + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') throw UsageError("malformed integer literal '" + s + "'");
  Integer r(s.substr(i));
  return s[0] == '-' ? Integer(-r) : r;
}

inline std::string to_string(const Integer& v) { return v.str(); }

/// Number of bits of |v|; zero has bitlength 0.
inline unsigned bitlength(const Integer& v) {
  if (v == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(v))) + 1;
}

/// ceil(log2(v)) for v >= 1.
inline unsigned ceil_log2(const Integer& v) {
  if (v <= 1) return 0;
  return bitlength(v - 1);
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

/// Least non-negative residue.
inline Integer mod(const Integer& a, const Integer& n) {
  Integer r = a % n;
  if (r < 0) r += abs(n);
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer powm(const Integer& base, const Integer& e, const Integer& n) {
  return boost::multiprecision::powm(mod(base, n), e, n);
}

/// Inverse of a modulo n; throws when gcd(a, n) != 1.
inline Integer inverse_mod(const Integer& a, const Integer& n) {
  Integer r0 = n, r1 = mod(a, n), s0 = 0, s1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1) throw DomainError(ErrorKind::NotInvertible, "value is not invertible modulo n");
  return mod(s0, n);
}

inline Integer isqrt(const Integer& v) {
  if (v < 0) throw DomainError(ErrorKind::OutOfRange, "square root of a negative integer");
  return boost::multiprecision::sqrt(v);
}

inline bool is_perfect_square(const Integer& v) {
  if (v < 0) return false;
  Integer s = isqrt(v);
  return s * s == v;
}

namespace detail {

inline Integer random_below(std::mt19937_64& rng, const Integer& bound) {
  const unsigned words = bitlength(bound) / 64 + 2;
  Integer x = 0;
  for (unsigned i = 0; i < words; ++i) {
    x <<= 64;
    x |= rng();
  }
  return x % bound;
}

}  // namespace detail

inline constexpr u64 kPrimalitySeed = 0x51ed2701c0ffee11ULL;

/// Miller–Rabin with `rounds` pseudo-random bases drawn from a fixed seed.
/// Deterministic for a given input; "true" means probable prime.
inline bool is_probable_prime(const Integer& n, int rounds = 64) {
  if (n < 2) return false;
  static constexpr unsigned kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (unsigned q : kSmall) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  Integer d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::mt19937_64 rng(kPrimalitySeed);
  const Integer span = n - 3;
  for (int round = 0; round < rounds; ++round) {
    Integer a = detail::random_below(rng, span) + 2;
    Integer x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

struct Factorization {
  std::vector<std::pair<Integer, unsigned>> factors;  // (prime, exponent), ascending
  Integer remainder = 1;           // unfactored part > trial bound, 1 if none
  bool remainder_prime = true;     // probable-prime verdict for remainder

  Integer largest_prime_factor() const {
    if (remainder != 1 && remainder_prime) return remainder;
    return factors.empty() ? Integer(1) : factors.back().first;
  }
};

/// Trial division up to `bound` followed by Miller–Rabin on what is left.
inline Factorization factor_small(Integer n, u64 bound = u64{1} << 20) {
  if (n <= 0) throw DomainError(ErrorKind::OutOfRange, "factor_small expects a positive integer");
  Factorization f;
  auto strip = [&](u64 q) {
    unsigned e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) f.factors.emplace_back(Integer(q), e);
  };
  strip(2);
  for (u64 q = 3; q <= bound && Integer(q) * q <= n; q += 2) strip(q);
  if (n > 1) {
    if (n <= Integer(bound) * bound) {
      // n has no factor <= sqrt(n), so it is prime.
      f.factors.emplace_back(n, 1);
    } else {
      f.remainder = n;
      f.remainder_prime = is_probable_prime(n);
    }
  }
  return f;
}

inline std::string to_string(const Factorization& f) {
  std::string out;
  for (const auto& [q, e] : f.factors) {
    if (!out.empty()) out += '*';
    out += q.str();
    if (e > 1) out += '^' + std::to_string(e);
  }
  if (f.remainder != 1) {
    if (!out.empty()) out += '*';
    out += f.remainder.str();
    if (!f.remainder_prime) out += "(composite)";
  }
  return out.empty() ? "1" : out;
}

}  // namespace qcurve
