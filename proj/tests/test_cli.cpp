#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahe/cli/cli.hpp"
#include "ahe/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace ahe;
using namespace ahe::cli;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ahe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const json* record(const json& report, const std::string& id) {
  for (const auto& r : report["records"])
    if (r["id"] == id) return &r;
  return nullptr;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kNonFinite;
}

}  // namespace

TEST_CASE("family argument grammar") {
  const auto s = parse_family_spec("taub-bolt:s=3,k=2");
  CHECK(s.tag == "taub-bolt");
  CHECK(s.params.at("s") == 3.0);
  CHECK(s.params.at("k") == 2.0);
  CHECK(parse_family_spec("poincare").params.empty());
  for (const char* bad : {"", ":m=1", "ads-schw:", "ads-schw:m", "ads-schw:m=", "ads-schw:m=1,m=2",
                          "ads-schw:m=1x", "ads-schw:=1", "ads schw:m=1", "ads-schw:m=nan"}) {
    INFO(bad);
    CHECK(code_of([&] { parse_family_spec(bad); }) == ErrorCode::kUsage);
  }
}

TEST_CASE("families require their physical parameters") {
  CHECK(make_family(parse_family_spec("ads-schw:m=1.0")).id == "ads-schw:m=1");
  CHECK(make_family(parse_family_spec("quotient:L=2")).family == Family::kHyperbolicQuotient);
  CHECK(make_family(parse_family_spec("toral:m=1,a=2")).family == Family::kToralBlackHole);
  for (const char* bad : {"ads-schw", "ads-schw:m=1,k=2", "taub-bolt:s=3", "taub-bolt:s=3,k=1.5",
                          "hyp-quotient", "poincare:m=1", "kerr:m=1", "ads-schw:m=-1",
                          "taub-bolt:s=1.5,k=1"}) {
    INFO(bad);
    CHECK(code_of([&] { make_family(parse_family_spec(bad)); }) == ErrorCode::kUsage);
  }
  CHECK(make_curve(parse_family_spec("berger:k=3")).id == "berger:k=3");
  CHECK(code_of([&] { make_curve(parse_family_spec("berger")); }) == ErrorCode::kUsage);
  CHECK(default_families().size() == 10);
}

TEST_CASE("verify-einstein on AdS-Schwarzschild") {
  const auto r = invoke({"verify-einstein", "--family", "ads-schw:m=1.0"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["config"]["families"][0] == "ads-schw:m=1.0");
  const auto* rec = record(j, "ads-schw:m=1/einstein-residual");
  REQUIRE(rec);
  CHECK((*rec)["status"] == "pass");
  CHECK((*rec)["residual"].get<double>() < 1e-6);
  for (const char* key : {"id", "anchor", "status", "value", "expected", "tolerance", "residual"})
    CHECK(rec->contains(key));
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"verify-einstein", "--family", "ads-schw"}).code == 2);
  CHECK(invoke({"verify-einstein", "--bogus"}).code == 2);
  const auto grammar = invoke({"verify-einstein", "--family", "ads-schw:m"});
  CHECK(grammar.code == 2);
  CHECK(grammar.err.find("key=val") != std::string::npos);
  CHECK(invoke({"orbifold", "--k-range", "5"}).code == 2);
  CHECK(invoke({"verify-einstein", "--format", "xml"}).code == 2);
  CHECK(invoke({"moduli"}).code == 2);
  // a tolerance nothing meets fails the record, not the invocation
  const auto strict = invoke({"verify-einstein", "--family", "poincare", "--tol", "0"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("einstein-residual") != std::string::npos);
  CHECK(strict.err.find("Ric + 3g") != std::string::npos);
  // the cusp has no compactification
  const auto cusp = invoke({"fg-expand", "--family", "cusp"});
  CHECK(cusp.code == 1);
  CHECK(cusp.err.find("not-conformally-compact") != std::string::npos);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("fg-expand on the hyperbolic ball") {
  const auto r = invoke({"fg-expand", "--family", "poincare"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  const auto* g2 = record(j, "poincare/g2-hyperbolic");
  const auto* g3 = record(j, "poincare/g3-vanishes");
  REQUIRE(g2);
  REQUIRE(g3);
  CHECK((*g2)["residual"].get<double>() < 1e-6);
  CHECK((*g3)["residual"].get<double>() < 1e-6);
  const auto* sign = record(j, "calibration/g2-sign");
  REQUIRE(sign);
  CHECK((*sign)["status"] == "pass (paper-discrepancy-noted)");
}

TEST_CASE("orbifold report") {
  const auto r = invoke({"orbifold", "--k-range", "1..100"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  const auto& rows = j["data"]["orbifold"];
  REQUIRE(rows.size() == 100);
  for (const auto& row : rows) {
    const int k = row["k"];
    INFO("k=" << k);
    if (k >= 2) CHECK(row["excluded"].get<bool>() == (k >= 10));
    CHECK(row["nontrivial_group"].get<bool>() == (k >= 2));
  }
  CHECK(rows[1]["eta"] == "0/1");
  CHECK(rows[1]["ale_weyl_energy"] == "3/2");
  // the integer inequality also fails at k = 1
  CHECK(rows[0]["excluded"].get<bool>());
}

TEST_CASE("moduli subcommand") {
  const auto r = invoke({"moduli", "--curve", "bolt-period", "--value", "3.141592653589793"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  const auto& d = j["data"]["moduli"]["bolt-period"];
  REQUIRE(d["preimages"].size() == 2);
  CHECK(std::abs(d["preimages"][0]["parameter"].get<double>() - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(d["preimages"][1]["parameter"].get<double>() - 1.0) < 1e-10);
  CHECK(d["degree"]["degree"] == 0);
  const auto* mass = record(j, "bolt-period/fold-mass");
  REQUIRE(mass);
  CHECK((*mass)["status"] == "pass (paper-discrepancy-noted)");

  const auto above = json::parse(invoke({"moduli", "--curve", "bolt-period", "--value", "4"}).out);
  CHECK(above["data"]["moduli"]["bolt-period"]["witness"]["outside_image"].get<bool>());
  CHECK(above["data"]["moduli"]["bolt-period"]["preimages"].empty());
}

TEST_CASE("curve tables") {
  const auto beta = emit_curve(bolt_period_curve(), 0.05, 5.0, 200);
  auto best = beta.rows.front();
  for (const auto& row : beta.rows)
    if (row.second > best.second) best = row;
  CHECK(best.first == doctest::Approx(0.5774).epsilon(1e-4));
  CHECK(best.second == doctest::Approx(3.6276).epsilon(1e-4));
  CHECK(beta.header.rfind("r_plus,beta = ", 0) == 0);

  const auto k2 = emit_curve(berger_curve(2), 1.0, 20.0, 200);
  CHECK(k2.rows.front().second == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  for (std::size_t i = 1; i < k2.rows.size(); ++i) CHECK(k2.rows[i].second < k2.rows[i - 1].second);

  const auto k1 = emit_curve(berger_curve(1), 2.0, 20.0, 200);
  best = k1.rows.front();
  for (const auto& row : k1.rows)
    if (row.second > best.second) best = row;
  CHECK(best.first == doctest::Approx(3.7321).epsilon(1e-4));
  CHECK(best.second == doctest::Approx(0.0893).epsilon(1e-3));

  CHECK_THROWS_AS(emit_curve(bolt_period_curve(), 0.05, 5.0, 0), Error);
  CHECK_THROWS_AS(emit_curve(berger_curve(1), 1.0, 5.0, 10), Error);

  const auto csv = invoke({"moduli", "--curve", "berger:k=2", "--format", "csv", "--range", "1..20"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("s,\"E = ", 0) == 0);
  CHECK(invoke({"moduli", "--curve", "berger:k=2", "--format", "csv", "--grid", "0"}).code == 2);
}

TEST_CASE("degree table from the CLI") {
  const auto r = invoke({"catalog-degrees"});
  CHECK(r.code == 0);
  const auto rows = json::parse(r.out)["data"]["degrees"];
  std::map<std::string, int> got;
  for (const auto& row : rows) {
    got[row["manifold"]] = row["degree"];
    CHECK(row["mod2"].get<int>() == ((row["degree"].get<int>() % 2) + 2) % 2);
    CHECK_FALSE(row["anchor"].get<std::string>().empty());
  }
  CHECK(got.at("B4") == 1);
  CHECK(got.at("R2xS2") == 0);
  CHECK(got.at("S1xR3") == 1);
  CHECK(got.at("CP2-B4") == 0);
  CHECK(got.at("M10") == 1);
}

TEST_CASE("reports are deterministic and can be written to a file") {
  const auto a = invoke({"renorm", "--family", "ads-schw:m=1"});
  const auto b = invoke({"renorm", "--family", "ads-schw:m=1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const std::string path = "test_cli_report.csv";
  CHECK(invoke({"appendix", "--family", "poincare", "--format", "csv", "--out", path}).code == 0);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "id,anchor,status,value,expected,tolerance,residual,note");
  std::remove(path.c_str());
}
