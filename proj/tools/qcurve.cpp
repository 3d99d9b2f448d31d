// qcurve: construct and inspect the Q-curve families, decompose scalars,
// sweep small primes and run the invariant suite.
//
// Every result is one line on stdout: a JSON object with --json, otherwise
// space-separated key=value pairs. Big integers are decimal strings and
// field elements are "a+b*i". Exit status: 0 ok, 1 domain error, 2 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "qcurve/verify.hpp"

using namespace qcurve;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  int d = 2;
  std::string p, delta, s = "0", trace, m;
  std::string seed = "1";
  bool exhaustive = false;
  bool twist = false;
  bool json_out = false;
  std::optional<long long> cofactor, twist_cofactor;
  bool corrupt_table = false;
};

void flatten(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    if (!out.empty()) out += ' ';
    out += prefix + "=" + (j.is_string() ? j.get<std::string>() : j.dump());
  }
}

class Emitter {
 public:
  explicit Emitter(bool as_json) : json_(as_json) {}

  void emit(const json& record) const {
    if (json_) {
      std::cout << record.dump() << '\n';
    } else {
      std::string line;
      flatten(record, "", line);
      std::cout << line << '\n';
    }
  }

 private:
  bool json_;
};

std::string dec(const Integer& v) { return v.str(); }

json vec(const Vec2& v) { return json::array({dec(v.x), dec(v.y)}); }

std::shared_ptr<const FieldCtx> make_field(const Options& o) {
  if (o.p.empty()) throw UsageError("--p is required");
  const Integer p = parse_integer(o.p);
  if (p < 5 || !is_probable_prime(p)) throw DomainError(ErrorKind::NotPrime, o.p + " is not a prime > 3");
  if (o.delta.empty()) return verify::default_field(p);
  return FieldCtx::create(p, parse_integer(o.delta));
}

json inputs(const Options& o, const FieldCtx& f) {
  json in{{"d", std::to_string(o.d)}, {"p", dec(f.p())}, {"delta", dec(f.delta())}, {"s", dec(mod(parse_integer(o.s), f.p()))}};
  if (!o.trace.empty()) in["trace"] = dec(parse_integer(o.trace));
  if (!o.m.empty()) in["m"] = dec(parse_integer(o.m));
  if (o.twist) in["twist"] = "1";
  return in;
}

json cm_status(const FamilyCurve& F) {
  json out = json::array();
  for (const CmMatch& m : detect_cm(F))
    out.push_back({{"disc", m.fiber.disc.to_string()}, {"fiber", m.fiber.sdelta_text()},
                   {"j_consistent", m.j_consistent}});
  return out;
}

json setup_json(const GlvSetup& S) {
  return {{"trace", dec(S.trace)},
          {"r", dec(S.r)},
          {"order", dec(S.order)},
          {"order_factors", to_string(factor_small(S.order))},
          {"twist_order", dec(S.other_order)},
          {"twist_order_factors", to_string(factor_small(S.other_order))},
          {"N", dec(S.N)},
          {"N_bits", bitlength(S.N)},
          {"cofactor", dec(S.cofactor)},
          {"lambda", dec(S.lambda)},
          {"basis",
           {{"variant", std::string(to_string(S.basis.variant))},
            {"b1", vec(S.basis.b1)},
            {"b2", vec(S.basis.b2)},
            {"bitlength", S.basis.bitlength()},
            {"reduced_by_gauss", S.basis.reduced_by_gauss}}}};
}

// Trace of the family curve: given, or counted when p is small enough.
std::optional<Integer> base_trace(const Options& o, const FamilyCurve& F) {
  if (!o.trace.empty()) return parse_integer(o.trace);
  if (F.field().p() <= kOracleMaxPrime) return oracle_trace(F);
  return std::nullopt;
}

json cmd_info(const Options& o) {
  auto f = make_field(o);
  const FamilyCurve F = build_family_curve(o.d, f, parse_integer(o.s));
  json out{{"A", F.curve.A().to_string()},
           {"B", F.curve.B().to_string()},
           {"j", F.curve.j_invariant().to_string()},
           {"epsilon", epsilon_p(o.d, f->p())},
           {"cm", cm_status(F)}};
  if (const auto t = base_trace(o, F)) {
    out["trace_source"] = o.trace.empty() ? "oracle" : "input";
    try {
      out["glv"] = setup_json(glv_setup(F, *t, o.twist));
    } catch (const DomainError& e) {
      // The curve is still reported; only the lattice data is missing.
      if (e.kind() != ErrorKind::GroupStructureMismatch && e.kind() != ErrorKind::Supersingular) throw;
      out["glv_error"] = {{"code", std::string(to_string(e.kind()))}, {"message", e.what()}};
    }
  }
  return {{"command", "info"}, {"status", "ok"}, {"inputs", inputs(o, *f)}, {"outputs", out}};
}

json cmd_decompose(const Options& o) {
  if (o.m.empty()) throw UsageError("--m is required");
  auto f = make_field(o);
  const FamilyCurve F = build_family_curve(o.d, f, parse_integer(o.s));
  const auto t = base_trace(o, F);
  if (!t) throw UsageError("--trace is required for p > " + std::to_string(kOracleMaxPrime));
  const GlvSetup S = glv_setup(F, *t, o.twist);
  const Integer m = parse_integer(o.m);
  const Decomposition D = decompose(m, S.basis);
  const unsigned bound = lemma_bitlength(S.basis.variant, f->p(), S.psi.sign(), S.r);
  const Point P = subgroup_point(S, static_cast<u64>(parse_integer(o.seed)));
  const bool agrees = multiexp2(D.a, D.b, P, S.psi.apply(P), S.curve()) == S.curve().mul(m, P);
  json out{{"a", dec(D.a)},
           {"b", dec(D.b)},
           {"a_bits", bitlength(abs(D.a))},
           {"b_bits", bitlength(abs(D.b))},
           {"norm_bits", D.norm() == 0 ? 0u : ceil_log2(D.norm())},
           {"bound_bits", bound},
           {"variant", std::string(to_string(S.basis.variant))},
           {"lambda", dec(S.lambda)},
           {"N", dec(S.N)},
           {"multiexp_check", agrees ? "ok" : "mismatch"}};
  bool ok = agrees;
  if (o.exhaustive) {
    require_oracle_scale(*f);
    Integer minimal = 0;
    for (Integer k = 0; k < S.N; ++k)
      if (decompose(k, S.basis).norm() == verify::coset_minimum(k, S.lambda, S.N)) ++minimal;
    out["exhaustive"] = {{"scalars", dec(S.N)}, {"minimal", dec(minimal)}};
    ok = ok && minimal == S.N;
  }
  json rec{{"command", "decompose"}, {"status", ok ? "ok" : "error"}, {"inputs", inputs(o, *f)}, {"outputs", out}};
  if (!ok) rec["code"] = "check_failed";
  return rec;
}

int cmd_search(const Options& o, const Emitter& out) {
  auto f = make_field(o);
  require_oracle_scale(*f);
  const Integer& p = f->p();
  check_family_field(o.d, *f);
  long long members = 0, emitted = 0;
  std::set<std::string> js;
  for (Integer s = 0; s < p; ++s) {
    if (is_degenerate(o.d, *f, s)) continue;
    ++members;
    const FamilyCurve F = build_family_curve(o.d, f, s);
    js.insert(F.curve.j_invariant().to_string());
    const Integer n = oracle_order(F.curve);
    const Integer nt = 2 * (p * p + 1) - n;
    const Integer h = n / factor_small(n).largest_prime_factor();
    const Integer ht = nt / factor_small(nt).largest_prime_factor();
    if (o.cofactor && h != *o.cofactor) continue;
    if (o.twist_cofactor && ht != *o.twist_cofactor) continue;
    const Integer t = trace_of(F.curve, n);
    json rec{{"command", "search"},
             {"status", "ok"},
             {"s", dec(s)},
             {"j", F.curve.j_invariant().to_string()},
             {"trace", dec(t)},
             {"r", dec(determine_r(Endo::from_family(F), t))},
             {"order", dec(n)},
             {"order_factors", to_string(factor_small(n))},
             {"cofactor", dec(h)},
             {"twist_order", dec(nt)},
             {"twist_order_factors", to_string(factor_small(nt))},
             {"twist_cofactor", dec(ht)},
             {"cm", cm_status(F)}};
    out.emit(rec);
    ++emitted;
  }
  out.emit({{"command", "search"},
            {"status", "ok"},
            {"summary",
             {{"d", std::to_string(o.d)},
              {"p", dec(p)},
              {"members", std::to_string(members)},
              {"emitted", std::to_string(emitted)},
              {"distinct_j", std::to_string(js.size())}}}});
  return 0;
}

int cmd_tables(const Options& o, bool all_degrees, const Emitter& out) {
  std::vector<int> degrees = all_degrees ? std::vector<int>{2, 3, 5, 7} : std::vector<int>{o.d};
  for (int d : degrees)
    for (const CmFiber& fb : cm_fibers(d))
      out.emit({{"table", "fiber"},
                {"d", std::to_string(d)},
                {"sdelta", fb.sdelta_text()},
                {"num", std::to_string(fb.num)},
                {"den", std::to_string(fb.den)},
                {"radicand", std::to_string(fb.radicand)},
                {"plus_minus", fb.plus_minus},
                {"constructible", !fb.at_infinity},
                {"disc", fb.disc.to_string()},
                {"disc_value", std::to_string(fb.disc.value())}});
  for (const CmJEntry& e : cm_j_table())
    out.emit({{"table", "j"},
              {"disc", e.disc.to_string()},
              {"class_number", e.class_number()},
              {"j", e.to_string()},
              {"factor_num", dec(e.factor_numerator())},
              {"factor_den", std::to_string(e.den)},
              {"a", dec(e.a)},
              {"b", dec(e.b)},
              {"radicand", std::to_string(e.radicand)}});
  return 0;
}

int cmd_selftest(const Options& o, const Emitter& out) {
  auto table = cm_j_table();
  // Test hook: perturb the j-value for -8*1^2 (20^3 -> 21^3).
  if (o.corrupt_table)
    for (auto& e : table)
      if (e.disc == Discriminant{8, 1}) e.base = 21;
  int failed = 0;
  for (const auto& c : verify::selftest_checks(table)) {
    const auto r = verify::run_check(c.id, c.name, c.budget_seconds, c.fn);
    json rec{{"command", "selftest"}, {"property", r.name}, {"status", r.passed ? "pass" : "fail"},
             {"seconds", r.seconds}};
    if (!r.passed) rec["detail"] = r.detail;
    out.emit(rec);
    failed += !r.passed;
  }
  out.emit({{"command", "selftest"}, {"status", failed == 0 ? "ok" : "error"}, {"failed", failed}});
  return failed == 0 ? 0 : 1;
}

json error_record(const std::string& command, const std::string& code, const std::string& message) {
  return {{"command", command}, {"status", "error"}, {"code", code}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-curve families with efficient endomorphisms"};
  app.require_subcommand(1);
  Options o;

  auto family_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--d", o.d, "family degree")->check(CLI::IsMember({2, 3, 5, 7}));
    cmd->add_option("--p", o.p, "prime (decimal)")->required();
    cmd->add_option("--delta", o.delta, "nonresidue defining F_{p^2} (signed, reduced mod p)");
  };
  auto curve_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--s", o.s, "family parameter");
    cmd->add_option("--trace", o.trace, "trace of Frobenius of the family curve (signed)");
    cmd->add_flag("--twist", o.twist, "use psi' on the quadratic twist");
  };
  app.add_flag("--json", o.json_out, "JSON records");

  auto* info = app.add_subcommand("info", "curve data, group orders and GLV basis");
  family_flags(info);
  curve_flags(info);

  auto* dec_cmd = app.add_subcommand("decompose", "decompose a scalar");
  family_flags(dec_cmd);
  curve_flags(dec_cmd);
  dec_cmd->add_option("--m", o.m, "scalar")->required();
  dec_cmd->add_option("--seed", o.seed, "seed for the check point");
  dec_cmd->add_flag("--exhaustive", o.exhaustive, "check minimality for every scalar mod N");

  auto* search = app.add_subcommand("search", "sweep s over F_p with point counting");
  family_flags(search);
  search->add_option("--cofactor", o.cofactor, "keep members with #E / (largest prime factor) = H");
  search->add_option("--twist-cofactor", o.twist_cofactor, "same filter on the quadratic twist");

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_flag("--corrupt-table", o.corrupt_table)->group("");

  auto* tables = app.add_subcommand("tables", "dump the CM fiber and j-invariant tables");
  auto* table_degree = tables->add_option("--d", o.d, "only this degree")->check(CLI::IsMember({2, 3, 5, 7}));

  for (CLI::App* cmd : {info, dec_cmd, search, selftest, tables}) cmd->add_flag("--json", o.json_out, "JSON records");

  std::string command = "qcurve";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const bool as_json = std::any_of(argv + 1, argv + argc, [](const char* a) { return std::string(a) == "--json"; });
    Emitter(as_json).emit(error_record(command, "usage", e.what()));
    std::cerr << e.what() << '\n';
    return 2;
  }

  const Emitter out(o.json_out);
  try {
    if (info->parsed()) {
      command = "info";
      out.emit(cmd_info(o));
      return 0;
    }
    if (dec_cmd->parsed()) {
      command = "decompose";
      const json rec = cmd_decompose(o);
      out.emit(rec);
      return rec["status"] == "ok" ? 0 : 1;
    }
    if (search->parsed()) {
      command = "search";
      return cmd_search(o, out);
    }
    if (selftest->parsed()) {
      command = "selftest";
      return cmd_selftest(o, out);
    }
    command = "tables";
    return cmd_tables(o, table_degree->count() == 0, out);
  } catch (const UsageError& e) {
    out.emit(error_record(command, "usage", e.what()));
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    out.emit(error_record(command, std::string(to_string(e.kind())), e.what()));
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
