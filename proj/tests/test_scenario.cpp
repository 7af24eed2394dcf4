// dwarp - scenario loading, check running and report emission tests

#include <fstream>

#include "doctest.h"
#include "dwarp/emit.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace dwarp;

namespace {

std::string fixture(const std::string& name) {
  return std::string(DWARP_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("load appendix case 1") {
  Scenario s = load_scenario(fixture("appendix_a.case1.scn"));
  CHECK(s.name == "appendix_a_case1");
  const auto& st = s.spacetimes.at("ST");
  CHECK(free_variables(st.sigma()).empty());            // sigma constant
  CHECK(free_variables(st.f()) == std::set<std::string>{"x"});  // f = r*(x+a), r,a bound
  CHECK(st.is_standard_static());
  CHECK_FALSE(st.is_generalized_robertson_walker());
  REQUIRE(s.checks.size() == 1);
  CHECK(s.checks[0].kind == "concurrent_check_st");
  CHECK(s.checks[0].expect == "concurrent");
}

TEST_CASE("empty checks list is a valid scenario with an empty report") {
  Scenario s = parse_scenario("scenario empty\nchart C { coords = x\n g x x = 1 }\n", "<mem>");
  CHECK(s.checks.empty());
  RunReport report = run(s);
  CHECK(report.checks.empty());
  CHECK(report.all_expected_matched);
  nlohmann::json parsed = nlohmann::json::parse(emit_json(report));
  CHECK(parsed.at("checks").is_array());
  CHECK(parsed.at("checks").empty());
}

TEST_CASE("scenario errors carry locations") {
  // Unresolved chart reference.
  CHECK_THROWS_AS(parse_scenario("product P { m1 = A\n m2 = B\n f1 = 1\n f2 = 1 }", "<mem>"),
                  ScenarioError);
  try {
    parse_scenario("chart C { coords = x\n g x x = 1 }\nfield F on D { x = 1 }\n", "<mem>");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& err) {
    CHECK(std::string(err.what()).find("unknown chart 'D'") != std::string::npos);
    CHECK(std::string(err.what()).find("<mem>:3") != std::string::npos);
  }

  // Field component on a non-coordinate (dimension mismatch).
  CHECK_THROWS_AS(
      parse_scenario("chart C { coords = x\n g x x = 1 }\nfield F on C { y = 1 }\n", "<mem>"),
      ScenarioError);

  // Malformed expression reports its line.
  try {
    parse_scenario("chart C { coords = x\n g x x = 1 + }\n", "<mem>");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& err) {
    CHECK(std::string(err.what()).find("<mem>:2") != std::string::npos);
  }

  // Unknown check kind is rejected at run time, before any check executes.
  Scenario s = parse_scenario("chart C { coords = x\n g x x = 1 }\ncheck bogus { }\n", "<mem>");
  CHECK_THROWS_AS(run(s), ScenarioError);

  // Missing file.
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.scn"), ScenarioError);
}

TEST_CASE("metric referencing an undeclared symbol is rejected") {
  CHECK_THROWS_AS(parse_scenario("chart C { coords = x\n g x x = a }\n", "<mem>"),
                  ScenarioError);
  // Declared as a const it is fine.
  Scenario s =
      parse_scenario("const a = 2\nchart C { coords = x\n g x x = a }\n", "<mem>");
  Point p;
  p.chart = "C";
  p.values = {{"x", 0.3}};
  CHECK(geom::metric_at(s.charts.at("C"), p)(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("all shipped fixture scenarios pass with expected verdicts") {
  for (const std::string name :
       {"prop2_oracle.scn", "appendix_a.case1.scn", "appendix_a.case2.scn",
        "appendix_a.case3.scn", "gaussian_soliton.scn", "conformal_fields.scn",
        "geodesics.scn"}) {
    Scenario s = load_scenario(fixture(name));
    RunReport report = run(s);
    INFO(name);
    for (const auto& check : report.checks) {
      INFO(check.name << " -> " << check.verdict);
      CHECK(check.matched);
    }
    CHECK(report.all_expected_matched);
  }
}

TEST_CASE("expected verdict mismatches flip the exit contract") {
  Scenario s = load_scenario(fixture("gaussian_soliton.scn"));
  s.checks[0].expect = "not_soliton";  // the Gaussian fixture IS a soliton
  RunReport report = run(s);
  CHECK_FALSE(report.all_expected_matched);
  CHECK_FALSE(report.checks[0].matched);
}

TEST_CASE("json reports are deterministic and round-trip") {
  Scenario s = load_scenario(fixture("gaussian_soliton.scn"));
  RunOverrides over;
  over.seed = 7;
  std::string a = emit_json(run(s, over));
  std::string b = emit_json(run(s, over));
  CHECK(a == b);  // byte-identical

  nlohmann::json parsed = nlohmann::json::parse(a);
  CHECK(parsed.at("scenario") == "gaussian_soliton");
  CHECK(parsed.at("seed") == 7);
  CHECK(parsed.at("checks").size() == s.checks.size());
  CHECK(parsed.at("checks")[0].at("verdict") == "soliton");
  CHECK(parsed.at("checks")[0].at("derived").at("lambda") == 1.0);
  // Lossless round trip: parse and re-dump byte-identically.
  CHECK(nlohmann::ordered_json::parse(a).dump(2) + "\n" == a);

  // A different seed changes sampled points but not verdicts.
  RunOverrides other;
  other.seed = 8;
  RunReport r8 = run(s, other);
  CHECK(r8.all_expected_matched);
}

TEST_CASE("text report mentions every check and the match summary") {
  Scenario s = load_scenario(fixture("geodesics.scn"));
  RunReport report = run(s);
  std::string text = emit_text(report);
  for (const auto& check : report.checks)
    CHECK(text.find(check.name) != std::string::npos);
  CHECK(text.find("all expected verdicts matched") != std::string::npos);
  CHECK_THROWS_AS(emit(report, "xml"), std::invalid_argument);
}

TEST_CASE("numeric failures become per-check errors, not aborts") {
  // ln(x) has a domain error on a box crossing zero.
  Scenario s = parse_scenario(
      "chart C { coords = x\n g x x = 1 }\n"
      "chart D { coords = y\n g y y = 1 }\n"
      "product P { m1 = C\n m2 = D\n f1 = 1\n f2 = 1 }\n"
      "field F on C { x = ln(x) }\n"
      "field Z on D { }\n"
      "splitfield S on P { part1 = F\n part2 = Z }\n"
      "box B { x = -1 1\n y = -1 1 }\n"
      "check connection_closed_form bad { target = P\n x = S\n y = S\n box = B }\n"
      "check assemble ok { target = P\n box = B }\n",
      "<mem>");
  RunReport report = run(s);
  REQUIRE(report.checks.size() == 2);
  CHECK(report.checks[0].verdict == "error");
  CHECK_FALSE(report.checks[0].pass);
  CHECK(report.checks[1].verdict == "pass");  // later checks still run
}

TEST_CASE("check kind registry lists the public operations") {
  auto kinds = check_kinds();
  CHECK(kinds.size() == 22);
  std::set<std::string> names;
  for (const auto& [kind, description] : kinds) {
    names.insert(kind);
    CHECK_FALSE(description.empty());
  }
  for (const std::string expected :
       {"assemble", "connection_closed_form", "f_diamond", "ricci_closed_form", "lie_split",
        "classify_conformal_product", "killing_projection", "geodesic_residual",
        "constant_length_report", "conformal_factor_along_curve", "lie_spacetime",
        "timelike_conformal_check", "killing_decomposition_check",
        "conformal_factor_along_curve_st", "concurrent_check_st", "solve_concurrent_2d",
        "soliton_residual", "th2_checks", "homothetic_lambda", "einstein_factor_check",
        "einstein_conformal_soliton", "product_soliton_lift"})
    CHECK(names.count(expected) == 1);
}

TEST_CASE("appendix-a builtin suite") {
  RunReport report = run_appendix_a();
  REQUIRE(report.checks.size() == 1);
  const auto& check = report.checks[0];
  CHECK(check.pass);
  CHECK(check.derived.at("negative_control_residual") >= 1e-2);
  // The note table mirrors the three tabulated rows.
  int rows = 0;
  for (const auto& note : check.notes)
    if (note.find("zeta =") != std::string::npos) ++rows;
  CHECK(rows == 3);
}
