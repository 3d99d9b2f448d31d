#include <gtest/gtest.h>

#include <map>
#include <set>

#include "qcurve/cmtab.hpp"

using namespace qcurve;

namespace {

std::shared_ptr<const FieldCtx> small_field(long long p) {
  for (long long d = 2;; ++d)
    if (legendre(-d, p) != 0 && legendre(d, p) == -1) return FieldCtx::create(p, p % 4 == 3 ? -1 : d);
}

bool prime(long long n) {
  if (n < 2) return false;
  for (long long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

// s in F_p on the fiber, or nullopt when the fiber has no F_p point at p.
std::optional<Integer> rational_parameter(const CmFiber& fiber, const FieldCtx& f) {
  const auto s = fiber_parameter(fiber, f);
  if (!s || !s->in_base_field()) return std::nullopt;
  return s->real();
}

// Independent fiber membership: plain integer arithmetic on the cleared equation.
std::set<long long> oracle_fiber_set(int d, long long p, long long delta) {
  std::set<long long> out;
  for (const CmFiber& fb : cm_fibers(d)) {
    if (fb.at_infinity || fb.den % p == 0) continue;
    for (long long s = 0; s < p; ++s) {
      const long long lhs = fb.plus_minus ? s * s % p * delta % p * (fb.den % p) % p * (fb.den % p) % p
                                          : s * (fb.den % p) % p;
      const long long rhs = fb.plus_minus ? ((fb.num % p) * (fb.num % p) % p * ((fb.radicand % p + p) % p)) % p
                                          : (fb.num % p + p) % p;
      if ((lhs - rhs) % p == 0) out.insert(s);
    }
  }
  return out;
}

}  // namespace

TEST(CmTables, Sizes) {
  EXPECT_EQ(class_number_one_table().size(), 13u);
  EXPECT_EQ(class_number_two_table().size(), 29u);
  EXPECT_EQ(cm_fibers(2).size(), 13u);
  EXPECT_EQ(cm_fibers(3).size(), 13u);
  EXPECT_EQ(cm_fibers(5).size(), 2u);
  EXPECT_EQ(cm_fibers(7).size(), 6u);
  EXPECT_THROW(cm_fibers(4), DomainError);
  for (const auto& e : class_number_two_table()) EXPECT_EQ(e.class_number(), 2);
}

TEST(CmTables, TableExamples) {
  for (const CmFiber& fb : cm_fibers(5)) {
    EXPECT_EQ(fb.disc, (Discriminant{4, 2}));
    EXPECT_EQ(find_j_entry(fb.disc)->factor_numerator(), Integer(66) * 66 * 66);
  }
  const auto d2 = cm_fibers(2);
  EXPECT_TRUE(std::any_of(d2.begin(), d2.end(), [](const CmFiber& f) {
    return !f.at_infinity && f.num == 0 && f.disc == Discriminant{8, 1};
  }));
  const auto d7 = cm_fibers(7);
  EXPECT_EQ(std::count_if(d7.begin(), d7.end(), [](const CmFiber& f) { return !f.at_infinity; }), 5);
  EXPECT_EQ(std::count_if(d7.begin(), d7.end(), [](const CmFiber& f) { return f.at_infinity; }), 1);
  for (const CmFiber& f : d7)
    if (f.at_infinity) {
      EXPECT_EQ(f.disc, (Discriminant{7, 1}));
    }
  EXPECT_EQ(find_j_entry({3, 2})->factor_numerator(), 54000);
  EXPECT_EQ(find_j_entry({8, 1})->factor_numerator(), 8000);
  EXPECT_EQ(find_j_entry({11, 1})->factor_numerator(), -32768);
  EXPECT_EQ(find_j_entry({15, 1})->to_string(), "-5*3^3*(1415+-637*sqrt(5))/2");
  EXPECT_FALSE(find_j_entry({5, 1}).has_value());
  EXPECT_EQ(cm_fibers(2)[1].sdelta_text(), "+-5/9*sqrt(-7)");
}

TEST(CmTables, EveryFiberMatchesItsJValue) {
  for (int d : {2, 3, 5, 7}) {
    for (const CmFiber& fiber : cm_fibers(d)) {
      if (fiber.at_infinity) continue;
      const auto entry = find_j_entry(fiber.disc);
      ASSERT_TRUE(entry) << fiber.disc.to_string();
      int used = 0;
      for (long long p = 11; used < 3 && p < 400; ++p) {
        if (!prime(p) || (d == 5 && p % 4 != 3)) continue;
        if (fiber.num % p == 0 && fiber.num != 0) continue;
        if (fiber.radicand % p == 0) continue;
        auto f = small_field(p);
        const auto s = rational_parameter(fiber, *f);
        if (!s || is_degenerate(d, *f, *s)) continue;
        const FamilyCurve F = build_family_curve(d, f, *s);
        const auto roots = j_values_mod(*entry, *f);
        EXPECT_NE(std::find(roots.begin(), roots.end(), F.curve.j_invariant()), roots.end())
            << "d=" << d << " " << fiber.sdelta_text() << " p=" << p;
        const auto neg = build_family_curve(d, f, -*s);
        if (fiber.plus_minus) {
          EXPECT_NE(std::find(roots.begin(), roots.end(), neg.curve.j_invariant()), roots.end());
        }
        const auto hits = detect_cm(F);
        EXPECT_TRUE(std::any_of(hits.begin(), hits.end(), [&](const CmMatch& m) {
          return m.fiber.disc == fiber.disc && m.j_consistent;
        })) << "d=" << d << " " << fiber.sdelta_text() << " p=" << p;
        ++used;
      }
      EXPECT_EQ(used, 3) << "d=" << d << " " << fiber.sdelta_text();
    }
  }
}

TEST(CmTables, FiberParametersOverTheQuadraticField) {
  std::vector<std::shared_ptr<const FieldCtx>> fields;
  for (long long p : {11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 43LL}) fields.push_back(small_field(p));
  EXPECT_TRUE(verify_cm_tables(fields).empty());
}

TEST(CmTables, CorruptedTableIsReported) {
  std::vector<std::shared_ptr<const FieldCtx>> fields{small_field(19), small_field(23)};
  auto table = cm_j_table();
  for (auto& e : table)
    if (e.disc == Discriminant{8, 1}) e.base = 21;
  const auto failures = verify_cm_tables(fields, table);
  ASSERT_FALSE(failures.empty());
  for (const auto& msg : failures) EXPECT_NE(msg.find("-8*1^2"), std::string::npos) << msg;
}

TEST(CmTables, DetectionSweepIsExact) {
  int flagged = 0;
  for (int d : {2, 3, 5, 7})
    for (long long p : {11LL, 13LL, 17LL, 19LL, 23LL}) {
      if (d == 5 && p % 4 != 3) continue;
      auto f = small_field(p);
      const long long delta = static_cast<long long>(f->delta());
      const auto expected = oracle_fiber_set(d, p, delta);
      for (long long s = 0; s < p; ++s) {
        if (is_degenerate(d, *f, s)) continue;
        const FamilyCurve F = build_family_curve(d, f, s);
        const auto hits = detect_cm(F);
        ASSERT_EQ(!hits.empty(), expected.count(s) == 1) << "d=" << d << " p=" << p << " s=" << s;
        for (const CmMatch& m : hits)
          EXPECT_TRUE(m.j_consistent) << "d=" << d << " p=" << p << " s=" << s << " " << m.fiber.disc.to_string();
        flagged += !hits.empty();
      }
    }
  EXPECT_GT(flagged, 20);
}

TEST(CmTables, DetectionExamples) {
  for (long long p : {11LL, 13LL, 19LL}) {
    auto f = small_field(p);
    auto has = [](const std::vector<CmMatch>& hits, Discriminant d) {
      return std::any_of(hits.begin(), hits.end(), [&](const CmMatch& m) { return m.fiber.disc == d; });
    };
    EXPECT_TRUE(has(detect_cm(build_family_curve(2, f, 0)), {8, 1}));
    EXPECT_EQ(build_family_curve(2, f, 0).curve.j_invariant(), Fp2::from_int(*f, 8000));
    EXPECT_TRUE(has(detect_cm(build_family_curve(3, f, 0)), {3, 2}));
    EXPECT_EQ(build_family_curve(3, f, 0).curve.j_invariant(), Fp2::from_int(*f, 54000));
  }
}

TEST(CmTables, FibersAreSymmetric) {
  for (int d : {2, 3})
    for (long long p : {11LL, 13LL, 17LL, 19LL}) {
      const auto set = oracle_fiber_set(d, p, static_cast<long long>(small_field(p)->delta()));
      for (long long s : set) EXPECT_EQ(set.count((p - s) % p), 1u);
    }
}

// Two parameters with equal j satisfy (s1 + s2)(63 delta s1 s2 - 65) = 0 and
// (delta s1 s2 + 1)(81 delta s1 s2 - 175) + 49 delta (s1 + s2)^2 = 0. The
// s2 = -s1 branch occurs iff -7 is not a square; the other branch adds
// collisions at some primes (p = 13, 37 among p < 64).
TEST(JCollisions, DegreeTwoCollisionsSolveTheResultant) {
  for (long long p = 11; p < 64; ++p) {
    if (!prime(p)) continue;
    auto f = small_field(p);
    const long long delta = static_cast<long long>(f->delta());
    std::map<std::string, std::vector<long long>> by_j;
    for (long long s = 0; s < p; ++s) by_j[build_family_curve(2, f, s).curve.j_invariant().to_string()].push_back(s);
    long long negated_pairs = 0, other_pairs = 0;
    for (const auto& [j, ss] : by_j)
      for (std::size_t a = 0; a < ss.size(); ++a)
        for (std::size_t b = a + 1; b < ss.size(); ++b) {
          const long long s1 = ss[a], s2 = ss[b], q = delta * s1 % p * s2 % p, sum = (s1 + s2) % p;
          EXPECT_EQ(sum * ((63 * q - 65) % p) % p, 0) << p << " " << s1 << " " << s2;
          EXPECT_EQ((((q + 1) * ((81 * q - 175) % p)) % p + 49 * delta % p * sum % p * sum) % p, 0)
              << p << " " << s1 << " " << s2;
          sum == 0 ? ++negated_pairs : ++other_pairs;
        }
    EXPECT_EQ(negated_pairs, legendre(-7, p) == 1 ? 0 : 1) << p;
    const long long distinct = static_cast<long long>(by_j.size());
    if (other_pairs == 0) {
      EXPECT_EQ(distinct, legendre(-7, p) == 1 ? p : p - 1) << p;
    }
    if (p == 13 || p == 37) {
      EXPECT_GT(other_pairs, 0) << p;
    }
  }
}

TEST(JCollisions, DistinctJCountsAtSmallPrimes) {
  // Brute-force counts over s in F_p.
  const std::map<long long, long long> expected{{11, 11}, {13, 11}, {17, 16}, {19, 18}, {29, 29}, {37, 35}};
  for (const auto& [p, count] : expected) {
    auto f = small_field(p);
    std::set<std::string> js;
    for (long long s = 0; s < p; ++s) {
      ASSERT_FALSE(is_degenerate(2, *f, s));
      js.insert(build_family_curve(2, f, s).curve.j_invariant().to_string());
    }
    EXPECT_EQ(static_cast<long long>(js.size()), count) << p;
  }
}
