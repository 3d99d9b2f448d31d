#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracle.hpp"
#include "qcurve/glv.hpp"
#include "qcurve/qfamily.hpp"

using namespace qcurve;

namespace {

const Integer kMersenne = (Integer(1) << 127) - 1;

std::shared_ptr<const FieldCtx> small_field(long long p) {
  for (long long d = 2;; ++d)
    if (legendre(-d, p) != 0 && legendre(d, p) == -1) return FieldCtx::create(p, p % 4 == 3 ? -1 : d);
}

std::vector<long long> primes_for(int d) {
  switch (d) {
    case 2:
    case 3: return {5, 7, 11, 13};
    case 5: return {7, 11};
    default: return {11, 13};
  }
}

struct GlvCase {
  int d;
  long long p, s;
  bool twisted;
  Endo psi;
  Integer order, N, r, lambda;
  Point P;  // generator of the order-N subgroup
};

// Every family curve (and its twist) at p <= 13 with a psi-stable subgroup of
// prime order N > 3 on which psi has an eigenvalue.
std::vector<GlvCase> small_cases() {
  std::vector<GlvCase> out;
  for (int d : {2, 3, 5, 7})
    for (long long p : primes_for(d)) {
      auto f = small_field(p);
      for (long long s = 0; s < p; ++s) {
        if (is_degenerate(d, *f, s)) continue;
        const FamilyCurve F = build_family_curve(d, f, s);
        for (bool twisted : {false, true}) {
          const Endo psi = Endo::from_family(F, twisted);
          const Curve& E = psi.curve();
          const Integer n = oracle_order(E);
          const Integer r = determine_r(psi, trace_of(E, n));
          const Integer N = factor_small(n).largest_prime_factor();
          if (N <= 3 || (n / N) % N == 0 || r % N == 0) continue;
          Point G = Point::at_infinity();
          for (const Point& Q : all_points(E)) {
            G = E.mul(n / N, Q);
            if (!G.infinity) break;
          }
          out.push_back({d, p, s, twisted, psi, n, N, r, eigenvalue(psi, r, N), G});
        }
      }
    }
  return out;
}

const std::vector<GlvCase>& cases() {
  static const std::vector<GlvCase> all = small_cases();
  return all;
}

std::string label(const GlvCase& c) {
  return "d=" + std::to_string(c.d) + " p=" + std::to_string(c.p) + " s=" + std::to_string(c.s) +
         (c.twisted ? " twist" : "");
}

GlvBasis basis_for(const GlvCase& c) {
  const BasisVariant v = select_variant(c.d, c.order / c.N);
  return cofactor_basis(v, c.p, c.psi.sign(), c.d, c.r, c.N, c.lambda);
}

bool in_lattice(const Vec2& v, const Integer& lambda, const Integer& N) { return mod(v.x + lambda * v.y, N) == 0; }

// Shortest nonzero vector of L by enumeration of a box.
Integer shortest_norm(const Integer& lambda, const Integer& N) {
  Integer best = N;
  for (Integer b = -N; b <= N; ++b)
    for (Integer a = -N; a <= N; ++a) {
      if (a == 0 && b == 0) continue;
      if (mod(a + lambda * b, N) == 0) best = std::min(best, std::max(abs(a), abs(b)));
    }
  return best;
}

}  // namespace

TEST(Glv, SmallCaseCoverage) {
  std::map<BasisVariant, int> seen;
  for (const GlvCase& c : cases()) ++seen[select_variant(c.d, c.order / c.N)];
  EXPECT_GT(cases().size(), 50u);
  EXPECT_GT(seen[BasisVariant::PrimeOrder], 0);
  EXPECT_GT(seen[BasisVariant::Cofactor2D2], 0);
  EXPECT_GT(seen[BasisVariant::Cofactor4D2], 0);
  EXPECT_GT(seen[BasisVariant::Cofactor3D3], 0);
}

TEST(Glv, SublatticeDeterminantIsGroupOrder) {
  for (const GlvCase& c : cases()) {
    const Vec2 e1{Integer(c.p) + c.psi.sign(), -c.r};
    const Vec2 e2{-Integer(c.psi.sign()) * c.d * c.r, Integer(c.p) + c.psi.sign()};
    EXPECT_EQ(det(e1, e2), c.order) << label(c);
    EXPECT_TRUE(in_lattice(e1, c.lambda, c.N)) << label(c);
    EXPECT_TRUE(in_lattice(e2, c.lambda, c.N)) << label(c);
    const auto [b1, b2] = sublattice_basis(c.p, c.psi.sign(), c.d, c.r);
    EXPECT_EQ(abs(det(b1, b2)), c.order) << label(c);
  }
}

TEST(Glv, LemmaBasesLieInLatticeAndAreReduced) {
  for (const GlvCase& c : cases()) {
    const GlvBasis B = basis_for(c);
    EXPECT_TRUE(in_lattice(B.b1, c.lambda, c.N)) << label(c);
    EXPECT_TRUE(in_lattice(B.b2, c.lambda, c.N)) << label(c);
    EXPECT_TRUE(is_reduced(B.b1, B.b2)) << label(c);
    EXPECT_EQ(abs(det(B.b1, B.b2)), c.N) << label(c);
    EXPECT_EQ(B.b1.norm(), shortest_norm(c.lambda, c.N)) << label(c);
  }
}

TEST(Glv, DecompositionIsOptimalForEveryScalar) {
  for (const GlvCase& c : cases()) {
    const GlvBasis B = basis_for(c);
    const Integer bound = B.b2.norm();
    for (Integer m = 0; m < c.N; ++m) {
      const Decomposition D = decompose(m, B);
      ASSERT_EQ(mod(D.a + D.b * c.lambda - m, c.N), 0) << label(c) << " m=" << m;
      ASSERT_EQ(D.norm(), oracle::coset_minimum(m, c.lambda, c.N, bound)) << label(c) << " m=" << m;
      ASSERT_LE(D.norm(), bound);
    }
  }
}

TEST(Glv, MultiexpReproducesScalarMultiplication) {
  for (const GlvCase& c : cases()) {
    const Curve& E = c.psi.curve();
    const Point Q = c.psi.apply(c.P);
    ASSERT_EQ(Q, E.mul(c.lambda, c.P));
    const GlvBasis B = basis_for(c);
    for (Integer m = 0; m < c.N; ++m) {
      const Decomposition D = decompose(m, B);
      ASSERT_EQ(multiexp2(D.a, D.b, c.P, Q, E), E.mul(m, c.P)) << label(c) << " m=" << m;
    }
  }
}

TEST(Glv, GaussReductionOfCanonicalBasis) {
  for (const GlvCase& c : cases()) {
    const auto [b1, b2] = lagrange_reduce({c.N, 0}, {-c.lambda, 1});
    EXPECT_TRUE(is_reduced(b1, b2)) << label(c);
    EXPECT_EQ(abs(det(b1, b2)), c.N);
    EXPECT_EQ(b1.norm(), shortest_norm(c.lambda, c.N)) << label(c);
    const GlvBasis B = basis_for(c);
    EXPECT_EQ(b1.norm(), B.b1.norm()) << label(c);
    EXPECT_EQ(b2.norm(), B.b2.norm()) << label(c);
  }
}

TEST(Glv, GaussReductionBasics) {
  const Vec2 a{3, 1}, b{-1, 4};
  ASSERT_TRUE(is_reduced(a, b));
  const auto [r1, r2] = lagrange_reduce(a, b);
  EXPECT_EQ(r1.norm(), a.norm());
  EXPECT_EQ(r2.norm(), b.norm());
  EXPECT_EQ(abs(det(r1, r2)), abs(det(a, b)));
  const auto [s1, s2] = lagrange_reduce({1000003, 0}, {-123457, 1});
  EXPECT_EQ(abs(det(s1, s2)), 1000003);
  EXPECT_TRUE(is_reduced(s1, s2));
  try {
    lagrange_reduce({2, 4}, {-1, -2});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DependentVectors);
  }
}

TEST(Glv, DecomposeEdgeCases) {
  const GlvCase& c = cases().front();
  const GlvBasis B = basis_for(c);
  const Decomposition z = decompose(0, B);
  EXPECT_EQ(z.a, 0);
  EXPECT_EQ(z.b, 0);
  const Decomposition n = decompose(c.N, B);
  EXPECT_EQ(n.a, 0);
  EXPECT_EQ(n.b, 0);
  GlvBasis bad = B;
  std::swap(bad.b1, bad.b2);
  bad.b2 = bad.b2 + Integer(5) * bad.b1;
  try {
    decompose(1, bad);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotReduced);
  }
}

TEST(Glv, MultiexpBasics) {
  const GlvCase& c = cases().front();
  const Curve& E = c.psi.curve();
  const Point Q = c.psi.apply(c.P);
  EXPECT_EQ(multiexp2(1, 0, c.P, Q, E), c.P);
  EXPECT_EQ(multiexp2(0, 1, c.P, Q, E), Q);
  EXPECT_TRUE(multiexp2(0, 0, c.P, Q, E).infinity);
  EXPECT_EQ(multiexp2(-3, 2, c.P, Q, E), E.add(E.mul(-3, c.P), E.mul(2, Q)));
  unsigned doublings = 0;
  multiexp2(Integer(37), Integer(-5), c.P, Q, E, &doublings);
  EXPECT_EQ(doublings, 6u);
  Point off = c.P;
  off.y = off.y + 1;
  EXPECT_THROW(multiexp2(1, 1, off, Q, E), DomainError);
}

TEST(Glv, VariantPreconditions) {
  auto expect_mismatch = [](auto&& fn) {
    try {
      fn();
      ADD_FAILURE() << "no error";
    } catch (const DomainError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::GroupStructureMismatch);
    }
  };
  // r even is not the cofactor-2 shape; r odd is not the cofactor-4 shape.
  expect_mismatch([] { cofactor_basis(BasisVariant::Cofactor2D2, 13, -1, 2, 2, 41, 3); });
  expect_mismatch([] { cofactor_basis(BasisVariant::Cofactor4D2, 13, -1, 2, 3, 41, 3); });
  expect_mismatch([] { cofactor_basis(BasisVariant::Cofactor3D3, 13, -1, 2, 1, 41, 3); });
  expect_mismatch([] { cofactor_basis(BasisVariant::Cofactor3D3, 11, 1, 3, 3, 41, 3); });
  // Wrong eigenvalue: the lemma vectors leave the lattice.
  const GlvCase& c = cases().front();
  expect_mismatch([&] {
    cofactor_basis(select_variant(c.d, c.order / c.N), c.p, c.psi.sign(), c.d, c.r, c.N, mod(c.lambda + 1, c.N));
  });
}

namespace {

// Lattice data for a synthetic r: n = (p + s)^2 - s d r^2 and
// lambda = (p + s)/r mod N with N = n / h.
struct Synthetic {
  Integer N, lambda;
};

// First r from the given start, stepping away from zero by 2, with
// gcd(r, N) = gcd(N, h) = 1 and N odd when h > 1.
Synthetic synthetic(const Integer& p, int sign, int d, Integer& r, int h) {
  for (;; r += r > 0 ? 2 : -2) {
    const Integer n = (p + sign) * (p + sign) - Integer(sign) * d * r * r;
    if (n % h != 0) continue;
    const Integer N = n / h;
    if ((h > 1 && N % 2 == 0) || gcd(r, N) != 1 || gcd(N, Integer(h)) != 1) continue;
    return {N, mod((p + sign) * inverse_mod(r, N), N)};
  }
}

const Integer kRPos = (Integer(1) << 62) + 12345;
const Integer kRNeg = -(Integer(1) << 61) - 777;

struct LargeCase {
  BasisVariant variant;
  int sign, d, h;
  Integer p, r;
};

// The lemma's ordered pair, transcribed independently of the library.
std::pair<Vec2, Vec2> lemma_pair(const LargeCase& c) {
  const Vec2 e1{c.p + c.sign, -c.r};
  const Vec2 e2{-Integer(c.sign) * c.d * c.r, c.p + c.sign};
  const bool pos = c.sign * c.r >= 0;
  auto half = [](const Vec2& v) { return Vec2{v.x / 2, v.y / 2}; };
  auto third = [](const Vec2& v) { return Vec2{v.x / 3, v.y / 3}; };
  switch (c.variant) {
    case BasisVariant::PrimeOrder:
      if (c.sign == -1) return {e1, e2};
      return {c.r > 0 ? e1 + e2 : e1 - e2, e1};
    case BasisVariant::Cofactor2D2: return {-half(e2), pos ? e1 + half(e2) : e1 - half(e2)};
    case BasisVariant::Cofactor4D2:
      if (c.sign == 1) return c.r >= 0 ? std::pair{half(e1 + e2), half(e2)} : std::pair{half(e1 - e2), -half(e2)};
      return {half(e1), c.r >= 0 ? half(e2) : -half(e2)};
    case BasisVariant::Cofactor3D3: return {third(e2), pos ? e1 + third(e2 + e2) : e1 - third(e2 + e2)};
    default: return {e1, e2};
  }
}

unsigned lemma_bitlength(const LargeCase& c) {
  switch (c.variant) {
    case BasisVariant::Cofactor2D2: return ceil_log2(c.p + c.sign - abs(c.r));
    case BasisVariant::Cofactor4D2: return ceil_log2(c.p + c.sign) - 1;
    case BasisVariant::Cofactor3D3: return ceil_log2(c.p + c.sign - 2 * abs(c.r));
    default: return ceil_log2(c.p + c.sign);
  }
}

std::vector<LargeCase> large_cases() {
  std::vector<LargeCase> out;
  for (int sign : {1, -1}) {
    for (int d : {2, 3, 5, 7})
      for (const Integer& r : {kRPos, kRNeg}) out.push_back({BasisVariant::PrimeOrder, sign, d, 1, kMersenne, r});
    for (const Integer& r : {kRPos, kRNeg}) out.push_back({BasisVariant::Cofactor2D2, sign, 2, 2, kMersenne, r});
    // (p + eps)/2 odd keeps N = #E/4 odd; 3 | p + eps for the d = 3 cases.
    const Integer p = sign == 1 ? kMersenne - 2 : kMersenne;
    for (const Integer& r : {kRPos + 1, kRNeg - 1}) out.push_back({BasisVariant::Cofactor4D2, sign, 2, 4, p, r});
    for (const Integer& r : {kRPos, kRNeg}) out.push_back({BasisVariant::Cofactor3D3, sign, 3, 3, p, r});
  }
  return out;
}

}  // namespace

TEST(GlvLarge, LemmaBitlengths) {
  int fallbacks = 0;
  for (LargeCase c : large_cases()) {
    const Synthetic S = synthetic(c.p, c.sign, c.d, c.r, c.h);
    const GlvBasis B = cofactor_basis(c.variant, c.p, c.sign, c.d, c.r, S.N, S.lambda);
    const std::string tag = std::string(to_string(c.variant)) + " sign=" + std::to_string(c.sign) + " r=" + c.r.str();
    const auto [l1, l2] = lemma_pair(c);
    EXPECT_TRUE(is_reduced(B.b1, B.b2)) << tag;
    EXPECT_EQ(abs(det(B.b1, B.b2)), S.N) << tag;
    EXPECT_EQ(B.reduced_by_gauss, !is_reduced(l1, l2)) << tag;
    EXPECT_EQ(B.b1.norm(), l1.norm()) << tag;
    EXPECT_EQ(B.b2.norm(), l2.norm()) << tag;
    EXPECT_EQ(B.bitlength(), lemma_bitlength(c)) << tag;
    // Only the orientation of the second vector is ever at fault.
    if (B.reduced_by_gauss) {
      EXPECT_TRUE(is_reduced(l1, -l2)) << tag;
      ++fallbacks;
    }
  }
  EXPECT_GT(fallbacks, 0);
}

TEST(GlvLarge, RandomScalarsStayWithinBound) {
  Integer r = kRPos;
  const Synthetic S = synthetic(kMersenne, 1, 2, r, 2);
  const GlvBasis B = cofactor_basis(BasisVariant::Cofactor2D2, kMersenne, 1, 2, r, S.N, S.lambda);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const Integer m = detail::random_below(rng, S.N);
    const Decomposition D = decompose(m, B);
    ASSERT_EQ(mod(D.a + D.b * S.lambda - m, S.N), 0);
    ASSERT_LE(D.norm(), B.b2.norm());
  }
}
