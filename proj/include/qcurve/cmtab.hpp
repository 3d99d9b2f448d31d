#pragma once

// Exceptional CM fibers of the four families and the class number 1 and 2
// j-invariant tables, with detection of CM parameters over F_{p^2}.

#include <optional>
#include <string>
#include <vector>

#include "qcurve/qfamily.hpp"

namespace qcurve {

/// The discriminant -D0 f^2 of an imaginary quadratic order.
struct Discriminant {
  long long D0 = 0, f = 1;

  long long value() const { return -D0 * f * f; }
  std::string to_string() const { return "-" + std::to_string(D0) + "*" + std::to_string(f) + "^2"; }
  friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

/// A fiber s sqrt(delta) = +-(num/den) sqrt(radicand). Rows without the sign
/// ambiguity (degree 5) give s itself: s sqrt(delta) = (num/den) sqrt(delta)
/// with radicand = delta = -1.
struct CmFiber {
  int d = 0;
  long long num = 0, den = 1, radicand = 1;
  bool plus_minus = true;
  bool at_infinity = false;  // the limit s -> infinity; not constructible
  Discriminant disc;

  std::string sdelta_text() const {
    if (at_infinity) return "inf";
    if (num == 0) return "0";
    std::string c = std::to_string(num) + (den == 1 ? "" : "/" + std::to_string(den));
    if (!plus_minus) return "s=" + c;
    return "+-" + c + "*sqrt(" + std::to_string(radicand) + ")";
  }
};

/// j = factor * (a + b sqrt(radicand)) and its conjugate, factor =
/// coef * base^3 / den. Class number 1 rows have b = 0, a = 1.
struct CmJEntry {
  Discriminant disc;
  long long coef = 1, base = 0, den = 1;
  Integer a = 1, b = 0;
  long long radicand = 0;

  int class_number() const { return b == 0 ? 1 : 2; }
  Integer factor_numerator() const { return Integer(coef) * Integer(base) * Integer(base) * Integer(base); }
  std::string to_string() const {
    if (base == 0) return "0";
    std::string fac = (coef == 1 ? "" : std::to_string(coef) + "*") + std::to_string(base) + "^3";
    if (b == 0) return fac;
    fac += "*(" + a.str() + "+-" + b.str() + "*sqrt(" + std::to_string(radicand) + "))";
    return den == 1 ? fac : fac + "/" + std::to_string(den);
  }
};

inline const std::vector<CmJEntry>& class_number_one_table() {
  static const std::vector<CmJEntry> t = {
      {{3, 1}, 1, 0},      {{3, 2}, 2, 30},     {{3, 3}, -3, 20},     {{4, 1}, 1, 12},      {{4, 2}, 1, 66},
      {{7, 1}, -1, 15},    {{7, 2}, 1, 255},    {{8, 1}, 1, 20},      {{11, 1}, -1, 32},    {{19, 1}, -1, 96},
      {{43, 1}, -1, 960},  {{67, 1}, -1, 5280}, {{163, 1}, -1, 640320},
  };
  return t;
}

inline const std::vector<CmJEntry>& class_number_two_table() {
  auto I = [](const char* s) { return parse_integer(s); };
  static const std::vector<CmJEntry> t = {
      {{3, 4}, 12, 15, 1, I("35010"), I("20213"), 3},
      {{3, 5}, -1, 96, 1, I("369830"), I("165393"), 5},
      {{3, 7}, -3, 480, 1, I("52518123"), I("11460394"), 21},
      {{4, 3}, 3, 4, 1, I("399849"), I("230888"), 3},
      {{4, 4}, 2, 3, 1, I("761354780"), I("538359129"), 2},
      {{4, 5}, 1, 12, 1, I("12740595841"), I("5697769392"), 5},
      {{7, 4}, 1, 15, 1, I("40728492440"), I("15393923181"), 7},
      {{8, 2}, 1, 10, 1, I("26125"), I("18473"), 2},
      {{8, 3}, 1, 20, 1, I("23604673"), I("9636536"), 6},
      {{11, 3}, -44, 16, 1, I("104359189"), I("18166603"), 33},
      {{15, 1}, -5, 3, 2, I("1415"), I("637"), 5},
      {{15, 2}, 5, 3, 2, I("274207975"), I("122629507"), 5},
      {{20, 1}, 5, 4, 1, I("1975"), I("884"), 5},
      {{24, 1}, 1, 12, 1, I("1399"), I("988"), 2},
      {{35, 1}, -5, 32, 1, I("360"), I("161"), 5},
      {{40, 1}, 5, 12, 1, I("24635"), I("11016"), 5},
      {{51, 1}, -4, 48, 1, I("6263"), I("1519"), 17},
      {{52, 1}, 1, 60, 1, I("15965"), I("4428"), 13},
      {{88, 1}, 1, 60, 1, I("14571395"), I("10303524"), 2},
      {{91, 1}, -1, 96, 1, I("5854330"), I("1623699"), 13},
      {{115, 1}, -5, 96, 1, I("48360710"), I("21627567"), 5},
      {{123, 1}, -1, 480, 1, I("6122264"), I("956137"), 41},
      {{148, 1}, 1, 60, 1, I("91805981021"), I("15092810460"), 37},
      {{187, 1}, -68, 240, 1, I("2417649815"), I("586366209"), 17},
      {{232, 1}, 1, 60, 1, I("1399837865393267"), I("259943365786104"), 29},
      {{235, 1}, -5, 1056, 1, I("69903946375"), I("31261995198"), 5},
      {{267, 1}, -4, 240, 1, I("177979346192125"), I("18865772964857"), 89},
      {{403, 1}, -1, 480, 1, I("11089461214325319155"), I("3075663155809161078"), 13},
      {{427, 1}, -1, 5280, 1, I("53028779614147702"), I("6789639488444631"), 61},
  };
  return t;
}

/// Class number 1 rows followed by class number 2 rows.
inline std::vector<CmJEntry> cm_j_table() {
  std::vector<CmJEntry> t = class_number_one_table();
  const auto& two = class_number_two_table();
  t.insert(t.end(), two.begin(), two.end());
  return t;
}

inline std::vector<CmFiber> cm_fibers(int d) {
  auto pm = [d](long long n, long long q, long long R, long long D0, long long f) {
    return CmFiber{d, n, q, R, true, false, {D0, f}};
  };
  auto inf = [d](long long D0) { return CmFiber{d, 0, 1, 1, false, true, {D0, 1}}; };
  switch (d) {
    case 2:
      return {inf(4),
              pm(5, 9, -7, 7, 1),
              pm(1, 2, 5, 20, 1),
              pm(5, 18, 13, 52, 1),
              pm(7, 12, 3, 4, 3),
              pm(0, 1, 1, 8, 1),
              pm(2, 3, 2, 24, 1),
              pm(70, 99, 2, 88, 1),
              pm(161, 360, 5, 4, 5),
              pm(20, 49, 6, 8, 3),
              pm(4, 9, 5, 40, 1),
              pm(145, 882, 37, 148, 1),
              pm(1820, 9801, 29, 232, 1)};
    case 3:
      return {inf(3),
              pm(5, 2, -2, 8, 1),
              pm(1, 2, 2, 24, 1),
              pm(0, 1, 1, 3, 2),
              pm(1, 4, -11, 11, 1),
              pm(1, 4, 17, 51, 1),
              pm(5, 9, 3, 3, 4),
              pm(1, 1, 5, 15, 1),
              pm(5, 32, 41, 123, 1),
              pm(9, 20, 5, 3, 5),
              pm(11, 25, 5, 15, 2),
              pm(53, 500, 89, 267, 1),
              pm(55, 252, 21, 3, 7)};
    case 5:
      return {CmFiber{5, 1, 1, -1, false, false, {4, 2}}, CmFiber{5, -9, 13, -1, false, false, {4, 2}}};
    case 7:
      return {inf(7), pm(1, 1, 5, 35, 1), pm(0, 1, 1, 7, 2), pm(1, 3, 13, 91, 1), pm(1, 3, 7, 7, 4),
              pm(5, 39, 61, 427, 1)};
  }
  throw DomainError(ErrorKind::OutOfRange, "family degree must be one of 2, 3, 5, 7");
}

inline std::optional<CmJEntry> find_j_entry(const Discriminant& disc, const std::vector<CmJEntry>& table) {
  for (const CmJEntry& e : table)
    if (e.disc == disc) return e;
  return std::nullopt;
}

inline std::optional<CmJEntry> find_j_entry(const Discriminant& disc) { return find_j_entry(disc, cm_j_table()); }

/// Reductions of the tabulated j-value(s) into F_{p^2}.
inline std::vector<Fp2> j_values_mod(const CmJEntry& e, const FieldCtx& f) {
  const Fp2 fac = Fp2::from_integers(f, e.factor_numerator()) / Fp2::from_int(f, e.den);
  if (e.b == 0) return {fac * Fp2::from_integers(f, e.a)};
  const Fp2 root = *sqrt(Fp2::from_int(f, e.radicand));
  const Fp2 a = Fp2::from_integers(f, e.a), b = Fp2::from_integers(f, e.b);
  return {fac * (a + b * root), fac * (a - b * root)};
}

/// A parameter s in F_{p^2} on the fiber (one choice of sign); nullopt for
/// the infinite fiber or when p divides the denominator.
inline std::optional<Fp2> fiber_parameter(const CmFiber& F, const FieldCtx& f) {
  if (F.at_infinity || F.den % f.p() == 0) return std::nullopt;
  const Fp2 c = Fp2::from_int(f, F.num) / Fp2::from_int(f, F.den);
  if (!F.plus_minus) return c;
  return c * *sqrt(Fp2::from_int(f, F.radicand)) / Fp2::root_delta(f);
}

/// Whether s (mod p) satisfies the fiber condition.
inline bool on_fiber(const CmFiber& F, const FieldCtx& f, const Integer& s) {
  if (F.at_infinity || F.den % f.p() == 0) return false;
  const Integer& p = f.p();
  const Integer sm = mod(s, p);
  if (!F.plus_minus) return mod(sm * F.den - F.num, p) == 0;
  return mod(sm * sm * f.delta() * F.den * F.den - Integer(F.num) * F.num * F.radicand, p) == 0;
}

struct CmMatch {
  CmFiber fiber;
  bool j_consistent = false;  // j(E) is a root of the tabulated value mod p
};

/// Fibers containing the family parameter of F, each cross-checked against
/// the j-table. Empty when the member is not on an exceptional fiber.
inline std::vector<CmMatch> detect_cm(const FamilyCurve& F, const std::vector<CmJEntry>& table = cm_j_table()) {
  std::vector<CmMatch> out;
  const Fp2 j = F.curve.j_invariant();
  for (const CmFiber& fiber : cm_fibers(F.d)) {
    if (!on_fiber(fiber, F.field(), F.s)) continue;
    bool ok = false;
    if (auto e = find_j_entry(fiber.disc, table))
      for (const Fp2& v : j_values_mod(*e, F.field())) ok = ok || v == j;
    out.push_back({fiber, ok});
  }
  return out;
}

/// Checks every finite fiber of every family against the j-table at the
/// given inert-prime fields: the family j at the fiber parameter must be a
/// root of the tabulated value. Returns one message per failure.
inline std::vector<std::string> verify_cm_tables(const std::vector<std::shared_ptr<const FieldCtx>>& fields,
                                                 const std::vector<CmJEntry>& table = cm_j_table()) {
  std::vector<std::string> failures;
  for (int d : {2, 3, 5, 7})
    for (const CmFiber& fiber : cm_fibers(d)) {
      if (fiber.at_infinity) continue;
      const auto e = find_j_entry(fiber.disc, table);
      if (!e) {
        failures.push_back("d=" + std::to_string(d) + " " + fiber.disc.to_string() + ": no table entry");
        continue;
      }
      for (const auto& field : fields) {
        const FieldCtx& f = *field;
        if (d == 5 && f.delta() != f.p() - 1) continue;
        const auto s = fiber_parameter(fiber, f);
        if (!s) continue;
        const auto j = family_j(d, f, *s);
        if (!j) continue;
        bool ok = false;
        for (const Fp2& v : j_values_mod(*e, f)) ok = ok || v == *j;
        if (!ok)
          failures.push_back("d=" + std::to_string(d) + " " + fiber.sdelta_text() + " " + fiber.disc.to_string() +
                             " p=" + f.p().str() + ": j=" + j->to_string() + " not a table root");
      }
    }
  return failures;
}

}  // namespace qcurve
