#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "qcurve/qcurve.hpp"

using json = nlohmann::json;

namespace {

const std::string kP = "170141183460469231731687303715884105727";
const std::string kTrace1 = "-272082382382015736940757543628153813996";
const std::string kTrace5 = "160084314926568661653252069280514036151";

struct CliRun {
  int status;
  std::vector<std::string> lines;

  json record(std::size_t i = 0) const { return json::parse(lines.at(i)); }
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(QCURVE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int st = pclose(pipe);
  CliRun r{WIFEXITED(st) ? WEXITSTATUS(st) : -1, {}};
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) r.lines.push_back(line);
  return r;
}

std::string example_one(const std::string& extra = "") {
  return "--d 2 --p " + kP + " --delta -1 --s 28106 --trace " + kTrace1 + " --json " + extra;
}

std::vector<std::string> key_paths(const json& j, const std::string& prefix = "") {
  std::vector<std::string> out;
  if (!j.is_object()) return {prefix};
  for (const auto& [k, v] : j.items())
    for (auto& s : key_paths(v, prefix + "/" + k)) out.push_back(s);
  return out;
}

}  // namespace

TEST(Cli, InfoDegreeTwoExample) {
  const CliRun r = run("info " + example_one());
  ASSERT_EQ(r.status, 0);
  ASSERT_EQ(r.lines.size(), 1u);
  const json g = r.record()["outputs"]["glv"];
  EXPECT_EQ(g["cofactor"], "2");
  EXPECT_EQ(g["N_bits"], 253);
  EXPECT_EQ(g["basis"]["variant"], "cofactor2_d2");
  EXPECT_EQ(g["basis"]["bitlength"], 127);
  const qcurve::Integer nt = qcurve::parse_integer(g["twist_order"].get<std::string>());
  EXPECT_EQ(g["twist_order_factors"], "2*" + (nt / 2).str());
  EXPECT_TRUE(qcurve::is_probable_prime(nt / 2));
  EXPECT_EQ(r.record()["inputs"]["s"], "28106");
}

TEST(Cli, InfoDegreeFiveExample) {
  const CliRun r = run("info --d 5 --p " + kP + " --delta -1 --s 7930 --trace " + kTrace5 + " --json");
  ASSERT_EQ(r.status, 0);
  const json g = r.record()["outputs"]["glv"];
  EXPECT_EQ(g["cofactor"], "1");
  EXPECT_EQ(g["N_bits"], 254);
  EXPECT_EQ(g["twist_order"], g["twist_order_factors"]);
}

TEST(Cli, OracleTraceGivesTheSameReportShape) {
  const CliRun counted = run("info --d 2 --p 13 --s 6 --json");
  ASSERT_EQ(counted.status, 0);
  const json out = counted.record()["outputs"];
  EXPECT_EQ(out["trace_source"], "oracle");
  const std::string t = out["glv"]["trace"];
  const CliRun given = run("info --d 2 --p 13 --s 6 --json --trace " + t);
  ASSERT_EQ(given.status, 0);
  EXPECT_EQ(key_paths(given.record()["outputs"]), key_paths(out));
  EXPECT_EQ(given.record()["outputs"]["glv"], out["glv"]);
}

TEST(Cli, DecomposeZeroAndRandomScalars) {
  const CliRun zero = run("decompose " + example_one("--m 0"));
  ASSERT_EQ(zero.status, 0);
  EXPECT_EQ(zero.record()["outputs"]["a"], "0");
  EXPECT_EQ(zero.record()["outputs"]["b"], "0");
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const qcurve::Integer m = (qcurve::Integer(1) << 252) + qcurve::detail::random_below(rng, qcurve::Integer(1) << 252);
    const CliRun r = run("decompose " + example_one("--m " + m.str() + " --seed " + std::to_string(k)));
    ASSERT_EQ(r.status, 0);
    const json o = r.record()["outputs"];
    EXPECT_LE(o["norm_bits"].get<int>(), 127);
    EXPECT_EQ(o["bound_bits"], 127);
    EXPECT_EQ(o["multiexp_check"], "ok");
  }
}

TEST(Cli, ExhaustiveDecomposition) {
  const CliRun r = run("decompose --d 3 --p 11 --s 3 --m 5 --exhaustive --json");
  ASSERT_EQ(r.status, 0);
  const json e = r.record()["outputs"]["exhaustive"];
  EXPECT_EQ(e["scalars"], e["minimal"]);
  EXPECT_EQ(e["scalars"], "47");
}

TEST(Cli, SearchSweep) {
  const CliRun r = run("search --d 2 --p 13 --json");
  ASSERT_EQ(r.status, 0);
  ASSERT_EQ(r.lines.size(), 14u);
  auto f = qcurve::FieldCtx::create(13, 2);
  for (std::size_t i = 0; i < 13; ++i) {
    const json rec = r.record(i);
    const auto F = qcurve::build_family_curve(2, f, qcurve::parse_integer(rec["s"].get<std::string>()));
    EXPECT_EQ(rec["order"], qcurve::oracle_order(F.curve).str());
  }
  EXPECT_EQ(r.record(13)["summary"]["distinct_j"], "11");
  EXPECT_EQ(r.record(13)["summary"]["members"], "13");

  const CliRun none = run("search --d 2 --p 13 --cofactor 1000 --json");
  ASSERT_EQ(none.status, 0);
  ASSERT_EQ(none.lines.size(), 1u);
  EXPECT_EQ(none.record()["summary"]["emitted"], "0");

  const CliRun filtered = run("search --d 2 --p 29 --cofactor 2 --twist-cofactor 2 --json");
  ASSERT_EQ(filtered.status, 0);
  for (std::size_t i = 0; i + 1 < filtered.lines.size(); ++i) {
    EXPECT_EQ(filtered.record(i)["cofactor"], "2");
    EXPECT_EQ(filtered.record(i)["twist_cofactor"], "2");
  }
}

TEST(Cli, Tables) {
  const CliRun r = run("tables --json");
  ASSERT_EQ(r.status, 0);
  int fibers = 0, js = 0;
  for (std::size_t i = 0; i < r.lines.size(); ++i) (r.record(i)["table"] == "fiber" ? fibers : js)++;
  EXPECT_EQ(fibers, 13 + 13 + 2 + 6);
  EXPECT_EQ(js, 42);
  const CliRun d5 = run("tables --d 5 --json");
  EXPECT_EQ(d5.record(0)["disc"], "-4*2^2");
  EXPECT_EQ(d5.record(1)["sdelta"], "s=-9/13");
}

TEST(Cli, ErrorsAndExitCodes) {
  const CliRun not_prime = run("info --d 2 --p 15 --json");
  EXPECT_EQ(not_prime.status, 1);
  EXPECT_EQ(not_prime.record()["code"], "not_prime");
  const CliRun square = run("info --d 2 --p 13 --delta 4 --json");
  EXPECT_EQ(square.status, 1);
  EXPECT_EQ(square.record()["code"], "delta_is_square");
  const CliRun guard = run("search --d 2 --p 67 --json");
  EXPECT_EQ(guard.status, 1);
  EXPECT_EQ(guard.record()["code"], "oracle_guard");
  const CliRun bad_trace = run("info " + example_one() + " --trace 5");
  EXPECT_EQ(bad_trace.status, 2);  // repeated option
  const CliRun inconsistent = run("info --d 2 --p " + kP + " --delta -1 --s 28106 --trace 5 --json");
  EXPECT_EQ(inconsistent.status, 1);
  EXPECT_EQ(inconsistent.record()["code"], "trace_inconsistent");
  const CliRun degree = run("info --d 4 --p 13 --json");
  EXPECT_EQ(degree.status, 2);
  EXPECT_EQ(degree.record()["code"], "usage");
  const CliRun literal = run("info --d 2 --p 13 --s 1x --json");
  EXPECT_EQ(literal.status, 2);
  const CliRun missing = run("decompose --d 2 --p " + kP + " --s 1 --m 3 --json");
  EXPECT_EQ(missing.status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(Cli, DeterministicAndTextFormat) {
  const CliRun a = run("search --d 3 --p 11");
  const CliRun b = run("search --d 3 --p 11");
  EXPECT_EQ(a.lines, b.lines);
  const CliRun t = run("info --d 2 --p 13 --s 6");
  ASSERT_EQ(t.lines.size(), 1u);
  const json j = run("info --d 2 --p 13 --s 6 --json").record();
  EXPECT_NE(t.lines[0].find("outputs.glv.N=" + j["outputs"]["glv"]["N"].get<std::string>()), std::string::npos);
  EXPECT_NE(t.lines[0].find("outputs.j=" + j["outputs"]["j"].get<std::string>()), std::string::npos);
}

TEST(Cli, SelftestAndCorruptedTable) {
  const CliRun ok = run("selftest --json");
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(ok.record(ok.lines.size() - 1)["status"], "ok");
  const CliRun bad = run("selftest --corrupt-table --json");
  EXPECT_EQ(bad.status, 1);
  bool named = false;
  for (std::size_t i = 0; i + 1 < bad.lines.size(); ++i) {
    const json rec = bad.record(i);
    if (rec["status"] == "fail") {
      EXPECT_NE(rec["detail"].get<std::string>().find("-8*1^2"), std::string::npos);
      named = named || rec["property"] == "CM fibers and j-tables";
    }
  }
  EXPECT_TRUE(named);
}
