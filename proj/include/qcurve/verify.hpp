#pragma once

// End-to-end checks: the two cryptographic-size examples, the degree 3
// construction at the Mersenne prime and exhaustive small-prime properties.
// Each check returns an empty string on success, a failure description
// otherwise.

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qcurve/cmtab.hpp"
#include "qcurve/models.hpp"
#include "qcurve/setup.hpp"

namespace qcurve::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Runs fn, timing it; a DomainError or a blown time budget is a failure.
inline CheckResult run_check(int id, std::string name, double budget_seconds, const std::function<std::string()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    failure = fn();
  } catch (const DomainError& e) {
    failure = std::string(to_string(e.kind())) + ": " + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (failure.empty() && budget_seconds > 0 && secs > budget_seconds)
    failure = "time budget exceeded: " + std::to_string(secs) + " s > " + std::to_string(budget_seconds) + " s";
  return {id, std::move(name), failure.empty(), failure, secs};
}

inline const Integer& mersenne127() {
  static const Integer p = (Integer(1) << 127) - 1;
  return p;
}

inline const Integer& example_one_trace() {
  static const Integer t = parse_integer("-272082382382015736940757543628153813996");
  return t;
}

inline const Integer& degree_five_trace() {
  static const Integer t = parse_integer("160084314926568661653252069280514036151");
  return t;
}

/// Field with the first nonresidue delta in -1, 2, -2, 3, -3, ...
inline std::shared_ptr<const FieldCtx> default_field(const Integer& p) {
  if (p % 4 == 3) return FieldCtx::create(p, -1);
  for (long long k = 2;; ++k)
    for (long long delta : {k, -k})
      if (legendre(delta, p) == -1) return FieldCtx::create(p, delta);
}

/// Inert primes up to bound admissible for the degree d family.
inline std::vector<long long> family_primes(int d, long long bound) {
  std::vector<long long> out;
  for (long long p = d + 1; p <= bound; ++p) {
    if (p < 5 || !is_probable_prime(p)) continue;
    if (d == 5 && p % 4 != 3) continue;
    out.push_back(p);
  }
  return out;
}

namespace detail {

/// Shared part of the two prime-order style examples at p = 2^127 - 1.
inline std::string check_large_example(int d, long long s, const Integer& t, int eps, unsigned order_bits,
                                       const Integer& cofactor) {
  const Integer& p = mersenne127();
  auto f = FieldCtx::create(p, -1);
  const FamilyCurve F = build_family_curve(d, f, s);
  if (epsilon_p(d, p) != eps) return "epsilon_p = " + std::to_string(epsilon_p(d, p));
  // (a) d r^2 = 2p + eps t
  const Integer q = 2 * p + eps * t;
  if (q % d != 0 || !is_perfect_square(q / d)) return "(a) 2p + eps t is not d times a square";
  // (b) orders
  const Integer n = p * p + 1 - t, nt = p * p + 1 + t;
  for (const Integer& m : {n, nt}) {
    if (m % cofactor != 0) return "(b) order not divisible by " + cofactor.str();
    const Integer N = m / cofactor;
    if (!is_probable_prime(N, 64)) return "(b) " + N.str() + " is not a probable prime";
    if (bitlength(N) != order_bits) return "(b) " + N.str() + " has " + std::to_string(bitlength(N)) + " bits";
  }
  // (c) the order kills seeded random points
  for (u64 k = 0; k < 100; ++k)
    if (!F.curve.mul(n, random_point(F.curve, 1000 + k)).infinity) return "(c) [#E]P != 0 for seed " + std::to_string(k);
  // (d) eigenvalue
  const GlvSetup S = glv_setup(F, t);
  if (abs(S.r) != isqrt(q / d)) return "(d) r mismatch";
  if (S.N != n / cofactor) return "(d) prime subgroup mismatch";
  const Integer lambda = mod((p + eps) * inverse_mod(S.r, S.N), S.N);
  if (lambda != S.lambda) return "(d) eigenvalue mismatch";
  if (mod(lambda * lambda - eps * d, S.N) != 0) return "(d) lambda^2 != eps d mod N";
  for (u64 k = 0; k < 5; ++k) {
    const Point P = subgroup_point(S, 2000 + k * 17);
    if (!F.curve.mul(S.N, P).infinity) return "(d) point not of order N";
    if (Endo::from_family(F).apply(P) != F.curve.mul(lambda, P)) return "(d) psi(P) != [lambda]P";
  }
  return {};
}

}  // namespace detail

/// Degree 2 example: explicit cofactor-2 basis, 1000 decompositions and a multiexp spot check.
inline std::string example_one() {
  if (auto f = detail::check_large_example(2, 28106, example_one_trace(), 1, 253, 2); !f.empty()) return f;
  const Integer& p = mersenne127();
  auto field = FieldCtx::create(p, -1);
  const FamilyCurve F = build_family_curve(2, field, 28106);
  const GlvSetup S = glv_setup(F, example_one_trace());
  // (e) the explicit vectors: [-e2/2, e1 +- e2/2]
  const Vec2 e1{p + 1, -S.r}, e2{-2 * S.r, p + 1};
  const Vec2 h = divide_exact(e2, 2);
  const Vec2 b1 = -h, b2 = S.r >= 0 ? e1 + h : e1 - h;
  for (const Vec2& v : {b1, b2})
    if (mod(v.x + S.lambda * v.y, S.N) != 0) return "(e) basis vector " + v.to_string() + " not in L";
  if (abs(det(b1, b2)) != S.N) return "(e) basis does not generate L";
  if (!is_reduced(b1, b2)) return "(e) explicit basis fails the reduction condition";
  if (S.basis.variant != BasisVariant::Cofactor2D2 || S.basis.reduced_by_gauss || !(S.basis.b1 == b1) ||
      !(S.basis.b2 == b2))
    return "(e) library basis differs from the explicit basis";
  std::mt19937_64 rng(2718);
  const Integer bound = Integer(1) << 127;
  for (int k = 0; k < 1000; ++k) {
    const Integer m = qcurve::detail::random_below(rng, S.N);
    const Decomposition D = decompose(m, S.basis);
    if (mod(D.a + D.b * S.lambda - m, S.N) != 0) return "(e) a + b lambda != m for m = " + m.str();
    if (D.norm() >= bound) return "(e) |(a, b)| >= 2^127 for m = " + m.str();
  }
  const Point P = subgroup_point(S, 31337);
  const Point Q = S.psi.apply(P);
  for (int k = 0; k < 10; ++k) {
    const Integer m = qcurve::detail::random_below(rng, S.N);
    const Decomposition D = decompose(m, S.basis);
    if (multiexp2(D.a, D.b, P, Q, F.curve) != F.curve.mul(m, P)) return "(e) multiexp mismatch for m = " + m.str();
  }
  return {};
}

inline std::string degree_five_example() {
  return detail::check_large_example(5, 7930, degree_five_trace(), 1, 254, 1);
}

/// Degree 3 at s = 10400: exact codomain and psi^2 = [-3] pi on 100 points.
inline std::string example_two() {
  const Integer& p = mersenne127();
  auto f = FieldCtx::create(p, -1);
  const FamilyCurve F = build_family_curve(3, f, 10400);
  if (!(F.phi.codomain() == F.curve.conjugate())) return "phi codomain differs from the conjugate curve";
  const Endo psi = Endo::from_family(F);
  if (psi.eps() != -1) return "epsilon_p != -1";
  for (u64 k = 0; k < 100; ++k) {
    const Point P = random_point(F.curve, 5000 + k);
    if (psi.apply(psi.apply(P)) != F.curve.mul(-3, pi_p2(P))) return "psi^2 != [-3] pi at seed " + std::to_string(k);
  }
  return {};
}

/// Every endomorphism identity on every point for all small families.
inline std::string endomorphism_identities() {
  long long points = 0;
  for (int d : {2, 3, 5, 7})
    for (long long p : family_primes(d, 13)) {
      auto f = default_field(p);
      for (long long s = 0; s < p; ++s) {
        if (is_degenerate(d, *f, s)) continue;
        const FamilyCurve F = build_family_curve(d, f, s);
        const std::string tag = " (d=" + std::to_string(d) + " p=" + std::to_string(p) + " s=" + std::to_string(s) + ")";
        const Endo psi = Endo::from_family(F);
        const Curve& E = F.curve;
        const Integer n = oracle_order(E), t = trace_of(E, n);
        const Integer r = determine_r(psi, t);
        const int sd = psi.eps() * d;
        for (const Point& P : all_points(E)) {
          const Point q = psi.apply(P);
          if (psi.apply(q) != E.mul(sd, pi_p2(P))) return "psi^2 != [eps d] pi" + tag;
          if (E.mul(r, q) != E.add(E.mul(p, P), E.mul(psi.eps(), pi_p2(P)))) return "[r]psi != [p] + eps pi" + tag;
          if (!E.add(E.sub(psi.apply(q), E.mul(Integer(d) * r, q)), E.mul(Integer(d) * p, P)).infinity)
            return "characteristic polynomial" + tag;
          ++points;
        }
        const GroupOrders go = group_orders(p, psi.eps(), d, r);
        const Integer nt = oracle_order(quadratic_twist(E).curve);
        if (go.base != n) return "#E differs from the closed form" + tag;
        if (n + nt != 2 * (Integer(p) * p + 1)) return "#E + #E' != 2(p^2 + 1)" + tag;
        if (go.twist != nt) return "#E' differs from the closed form" + tag;
      }
    }
  return points > 0 ? "" : "no points checked";
}

/// Minimum of max(|a|, |b|) over all (a, b) with a + b lambda = m mod N.
inline Integer coset_minimum(const Integer& m, const Integer& lambda, const Integer& N) {
  Integer best = -1;
  for (Integer b = -N; b <= N; ++b) {
    const Integer a = mod(m - b * lambda, N);
    for (const Integer& cand : {a, a - N}) {
      const Integer n = std::max(abs(cand), abs(b));
      if (best < 0 || n < best) best = n;
    }
  }
  return best;
}

/// For each degree, the small-prime curve with the largest prime subgroup
/// whose group structure matches an explicit basis.
inline std::vector<std::pair<FamilyCurve, GlvSetup>> optimality_curves() {
  std::vector<std::pair<FamilyCurve, GlvSetup>> out;
  for (int d : {2, 3, 5, 7}) {
    std::optional<std::pair<FamilyCurve, GlvSetup>> best;
    for (long long p : family_primes(d, 13)) {
      auto f = default_field(p);
      for (long long s = 0; s < p; ++s) {
        if (is_degenerate(d, *f, s)) continue;
        const FamilyCurve F = build_family_curve(d, f, s);
        try {
          const GlvSetup S = glv_setup(F, oracle_trace(F));
          if (S.basis.variant == BasisVariant::Generic) continue;
          if (!best || S.N > best->second.N) best.emplace(F, S);
        } catch (const DomainError&) {
        }
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

inline std::string decomposition_optimality() {
  const auto curves = optimality_curves();
  if (curves.size() != 4) return "no suitable curve for some degree";
  for (const auto& [F, S] : curves) {
    const Integer& p = F.field().p();
    const unsigned bound = lemma_bitlength(S.basis.variant, p, S.psi.sign(), S.r);
    for (Integer m = 0; m < S.N; ++m) {
      const Decomposition D = decompose(m, S.basis);
      const std::string tag = " (d=" + std::to_string(F.d) + " p=" + p.str() + " s=" + F.s.str() + " N=" +
                              S.N.str() + " m=" + m.str() + ")";
      if (mod(D.a + D.b * S.lambda - m, S.N) != 0) return "not a decomposition" + tag;
      if (D.norm() != coset_minimum(m, S.lambda, S.N)) return "not minimal" + tag;
      if (D.norm() > 0 && ceil_log2(D.norm()) > bound)
        return "exceeds the " + std::string(to_string(S.basis.variant)) + " bound of " + std::to_string(bound) +
               " bits" + tag;
    }
  }
  return {};
}

/// Distinct j over the degree 2 family for p in {11, 13, 17, 19}: p when -7
/// is a square, p - 1 otherwise.
inline std::string j_count() {
  std::string out;
  for (long long p : {11LL, 13LL, 17LL, 19LL}) {
    auto f = default_field(p);
    std::set<std::string> js;
    for (long long s = 0; s < p; ++s) {
      if (is_degenerate(2, *f, s)) return "degenerate member at p = " + std::to_string(p);
      js.insert(build_family_curve(2, f, s).curve.j_invariant().to_string());
    }
    const long long expected = legendre(-7, p) == 1 ? p : p - 1;
    if (static_cast<long long>(js.size()) != expected)
      out += (out.empty() ? "" : "; ") + std::string("p=") + std::to_string(p) + ": " + std::to_string(js.size()) +
             " distinct j, expected " + std::to_string(expected);
  }
  return out;
}

/// Montgomery ladder, Edwards addition, DIK maps and psi on the x-line
/// against Weierstrass arithmetic for the degree 2 family at p = 5, 7.
inline std::string models() {
  int montgomery = 0, edwards = 0, dik = 0;
  for (long long p : {5LL, 7LL}) {
    auto f = default_field(p);
    for (long long s = 0; s < p; ++s) {
      if (is_degenerate(2, *f, s)) continue;
      const FamilyCurve F = build_family_curve(2, f, s);
      const Curve& E = F.curve;
      const auto pts = all_points(E);
      const Integer n = oracle_order(E);
      const std::string tag = " (p=" + std::to_string(p) + " s=" + std::to_string(s) + ")";
      const auto mont = to_montgomery(F);
      if (const auto* M = std::get_if<MontgomeryCurve>(&mont)) {
        ++montgomery;
        const Endo psi = Endo::from_family(F);
        for (const Point& P : pts) {
          const MontgomeryPoint Q = M->map(P);
          if (!M->contains(Q) || M->unmap(Q) != P) return "Montgomery map" + tag;
          const XZPoint x = M->x_line(P);
          for (Integer m = 0; m <= n; ++m)
            if (!ladder(m, x, *M).same_as(M->x_line(E.mul(m, P)))) return "ladder at m = " + m.str() + tag;
          if (!psi_montgomery(x, *M).same_as(M->x_line(psi.apply(P)))) return "psi on the x-line" + tag;
        }
        const auto ed = to_edwards(F);
        const auto* Ed = std::get_if<EdwardsCurve>(&ed);
        if (!Ed) return "Edwards model missing" + tag;
        ++edwards;
        auto image = [&](const Point& P) -> std::optional<EdwardsPoint> {
          try {
            return Ed->map(P);
          } catch (const DomainError& e) {
            if (e.kind() != ErrorKind::EdwardsPole) throw;
            return std::nullopt;
          }
        };
        for (const Point& P : pts) {
          const auto a = image(P);
          if (a && (!Ed->contains(*a) || Ed->unmap(*a) != P)) return "Edwards map" + tag;
        }
        for (const Point& P : pts)
          for (const Point& Q : pts) {
            const auto a = image(P), b = image(Q);
            if (!a || !b) continue;
            try {
              if (Ed->unmap(Ed->add(*a, *b)) != E.add(P, Q)) return "Edwards addition" + tag;
            } catch (const DomainError& e) {
              if (e.kind() != ErrorKind::EdwardsPole || (image(E.add(P, Q)) && image(E.sub(P, Q))))
                return "Edwards addition failed off the exceptional set" + tag;
            }
          }
      }
      const auto dk = to_dik(F, DikVariant::DoublingD2);
      const Curve W = dik_equation(F, DikVariant::DoublingD2);
      if (const auto* D = std::get_if<DikCurve>(&dk)) {
        ++dik;
        for (const Point& P : pts) {
          if (!D->contains(D->map(P)) || D->unmap(D->map(P)) != P) return "DIK map" + tag;
          for (const Point& Q : pts)
            if (D->to_weierstrass(D->map(E.add(P, Q))) !=
                W.add(D->to_weierstrass(D->map(P)), D->to_weierstrass(D->map(Q))))
              return "DIK addition" + tag;
        }
      } else if (oracle_order(W) != oracle_order(quadratic_twist(E).curve)) {
        return "DIK equation is not the twist" + tag;
      }
    }
  }
  if (montgomery == 0 || edwards == 0 || dik == 0) return "some model never representable";
  return {};
}

/// s values on a fiber by plain integer arithmetic on the cleared condition.
inline std::set<long long> fiber_parameters_bruteforce(int d, long long p, long long delta) {
  std::set<long long> out;
  auto md = [p](long long v) { return ((v % p) + p) % p; };
  for (const CmFiber& fb : cm_fibers(d)) {
    if (fb.at_infinity || fb.den % p == 0) continue;
    for (long long s = 0; s < p; ++s) {
      const bool hit = fb.plus_minus
                           ? md(md(s * s) * md(delta) % p * md(fb.den * fb.den)) == md(md(fb.num * fb.num) * md(fb.radicand))
                           : md(s * md(fb.den)) == md(fb.num);
      if (hit) out.insert(s);
    }
  }
  return out;
}

/// Every finite fiber reproduces a tabulated j at three primes where its
/// parameter is rational, and detection flags exactly the fiber parameters.
inline std::string cm_tables(const std::vector<CmJEntry>& table = cm_j_table()) {
  for (int d : {2, 3, 5, 7})
    for (const CmFiber& fiber : cm_fibers(d)) {
      if (fiber.at_infinity) continue;
      const std::string tag = " (d=" + std::to_string(d) + " " + fiber.sdelta_text() + " " + fiber.disc.to_string() + ")";
      const auto entry = find_j_entry(fiber.disc, table);
      if (!entry) return "no j entry" + tag;
      int used = 0;
      for (long long p : family_primes(d, 1000)) {
        if (used == 3) break;
        if (p < 11 || fiber.radicand % p == 0 || (fiber.num != 0 && fiber.num % p == 0)) continue;
        auto f = default_field(p);
        const auto s = fiber_parameter(fiber, *f);
        if (!s || !s->in_base_field() || is_degenerate(d, *f, s->real())) continue;
        const FamilyCurve F = build_family_curve(d, f, s->real());
        bool ok = false;
        for (const Fp2& v : j_values_mod(*entry, *f)) ok = ok || v == F.curve.j_invariant();
        if (!ok) return "j is not a root of the table value at p = " + std::to_string(p) + tag;
        ++used;
      }
      if (used < 3) return "fewer than three usable primes" + tag;
    }
  for (int d : {2, 3, 5, 7})
    for (long long p : family_primes(d, 23)) {
      if (p < 11) continue;
      auto f = default_field(p);
      const long long delta = static_cast<long long>(f->delta());
      const auto expected = fiber_parameters_bruteforce(d, p, delta);
      for (long long s = 0; s < p; ++s) {
        if (is_degenerate(d, *f, s)) continue;
        const auto hits = detect_cm(build_family_curve(d, f, s), table);
        const std::string tag = " (d=" + std::to_string(d) + " p=" + std::to_string(p) + " s=" + std::to_string(s) + ")";
        if (hits.empty() == (expected.count(s) == 1)) return "detection differs from the fiber set" + tag;
        for (const CmMatch& m : hits)
          if (!m.j_consistent) return "detected fiber " + m.fiber.disc.to_string() + " has inconsistent j" + tag;
      }
    }
  return {};
}

/// Subfield curves: (psi')^2 = -pi on the twist, and the psi-fixed points of
/// E form a subgroup of order p + 1 - t0 with t0^2 - 2p = t_E.
inline std::string gls() {
  int curves = 0;
  for (long long p : {5LL, 7LL, 11LL, 13LL}) {
    auto f = default_field(p);
    for (long long A = 0; A < p; ++A)
      for (long long B = 0; B < p; ++B) {
        if ((4 * A * A * A + 27 * B * B) % p == 0) continue;
        const Curve C0 = Curve::create(f, A, B);
        const std::string tag = " (p=" + std::to_string(p) + " A=" + std::to_string(A) + " B=" + std::to_string(B) + ")";
        const Endo psit = Endo::gls(C0, true);
        const Curve& Et = psit.curve();
        for (const Point& P : all_points(Et))
          if (psit.apply(psit.apply(P)) != Et.neg(pi_p2(P))) return "(psi')^2 != -pi" + tag;
        const Endo psi = Endo::gls(C0);
        std::vector<Point> fixed;
        for (const Point& P : all_points(C0))
          if (psi.apply(P) == P) fixed.push_back(P);
        for (const Point& P : fixed)
          for (const Point& Q : fixed)
            if (psi.apply(C0.add(P, Q)) != C0.add(P, Q)) return "fixed points not a subgroup" + tag;
        long long base_count = 1;
        for (long long x = 0; x < p; ++x)
          for (long long y = 0; y < p; ++y)
            if ((y * y - (x * x % p * x + A * x + B)) % p == 0) ++base_count;
        const long long t0 = p + 1 - static_cast<long long>(fixed.size());
        if (static_cast<long long>(fixed.size()) != base_count) return "fixed subgroup is not E(F_p)" + tag;
        const Integer tE = trace_of(C0, oracle_order(C0));
        if (Integer(t0 * t0 - 2 * p) != tE) return "t0^2 - 2p != t_E" + tag;
        ++curves;
      }
  }
  return curves > 0 ? "" : "no curves checked";
}

/// Equal j-invariants in the degree 2 family at primes 11..61: every
/// colliding pair solves (s1 + s2)(63 delta s1 s2 - 65) = 0 and
/// (delta s1 s2 + 1)(81 delta s1 s2 - 175) + 49 delta (s1 + s2)^2 = 0, and
/// negated pairs occur exactly when -7 is not a square.
inline std::string j_collisions() {
  for (long long p = 11; p < 64; ++p) {
    if (!is_probable_prime(p)) continue;
    auto f = default_field(p);
    const long long delta = static_cast<long long>(f->delta());
    std::map<std::string, std::vector<long long>> by_j;
    for (long long s = 0; s < p; ++s) by_j[build_family_curve(2, f, s).curve.j_invariant().to_string()].push_back(s);
    int negated = 0;
    for (const auto& [j, ss] : by_j)
      for (std::size_t a = 0; a < ss.size(); ++a)
        for (std::size_t b = a + 1; b < ss.size(); ++b) {
          const long long q = delta * ss[a] % p * ss[b] % p, sum = (ss[a] + ss[b]) % p;
          const std::string tag = " (p=" + std::to_string(p) + " s=" + std::to_string(ss[a]) + "," +
                                  std::to_string(ss[b]) + ")";
          if (sum * ((63 * q - 65) % p) % p != 0) return "first collision equation" + tag;
          if ((((q + 1) * ((81 * q - 175) % p)) % p + 49 * delta % p * sum % p * sum) % p != 0)
            return "second collision equation" + tag;
          negated += sum == 0;
        }
    if ((negated > 0) != (legendre(-7, p) == -1)) return "negated pair vs -7 residuosity at p = " + std::to_string(p);
  }
  return {};
}

/// Field identities on seeded elements at a small prime and at 2^127 - 1.
inline std::string field_arithmetic() {
  for (const Integer& p : {Integer(13), Integer(1000003), mersenne127()}) {
    auto f = default_field(p);
    std::mt19937_64 rng(99);
    for (int k = 0; k < 200; ++k) {
      const Fp2 a = Fp2::from_integers(*f, qcurve::detail::random_below(rng, p), qcurve::detail::random_below(rng, p));
      const Fp2 b = Fp2::from_integers(*f, qcurve::detail::random_below(rng, p), qcurve::detail::random_below(rng, p));
      if (a.is_zero()) continue;
      if (!(a * a.inv()).is_one()) return "a * a^-1 != 1 at p = " + p.str();
      if ((a * b).conj() != a.conj() * b.conj()) return "conjugation is not multiplicative at p = " + p.str();
      const auto r = sqrt(a.square());
      if (!r || (*r != a && *r != -a)) return "sqrt(a^2) != +-a at p = " + p.str();
      if (a.pow(p * p - 1) != Fp2::one(*f)) return "a^(p^2 - 1) != 1 at p = " + p.str();
    }
  }
  return {};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<std::string()> fn;
};

inline std::vector<Criterion> criteria(const std::vector<CmJEntry>& table = cm_j_table()) {
  return {
      {1, "degree 2 example at p = 2^127 - 1", 60, example_one},
      {2, "degree 5 example at p = 2^127 - 1", 60, degree_five_example},
      {3, "degree 3 construction at s = 10400", 30, example_two},
      {4, "endomorphism identities on every point", 0, endomorphism_identities},
      {5, "decomposition optimality for every scalar", 0, decomposition_optimality},
      {6, "distinct j-invariants in the degree 2 family", 0, j_count},
      {7, "Montgomery, Edwards and DIK models", 0, models},
      {8, "CM fibers and j-tables", 0, [table] { return cm_tables(table); }},
      {9, "subfield curves and their twists", 0, gls},
  };
}

/// The invariant suite behind the CLI selftest: every acceptance check
/// except the literal j count, which is replaced by the collision equations.
inline std::vector<Criterion> selftest_checks(const std::vector<CmJEntry>& table = cm_j_table()) {
  std::vector<Criterion> out{{0, "field arithmetic", 0, field_arithmetic}};
  for (auto& c : criteria(table))
    if (c.id != 6) out.push_back(std::move(c));
  out.push_back({10, "degree 2 j collisions", 0, j_collisions});
  out.push_back({11, "CM fibers over F_{p^2}", 0, [table] {
                   std::vector<std::shared_ptr<const FieldCtx>> fields;
                   for (long long p : {11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 43LL}) fields.push_back(default_field(p));
                   const auto failures = verify_cm_tables(fields, table);
                   return failures.empty() ? std::string() : failures.front();
                 }});
  return out;
}

}  // namespace qcurve::verify
