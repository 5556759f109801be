#include "doctest.h"
#include "qpb/cli.hpp"
#include "qpb/errors.hpp"

using namespace qpb;

namespace {

ScenarioConfig scenario(const std::string& id) {
  ScenarioConfig c;
  c.scenario = id;
  return c;
}

bool has_line(const std::string& text, const std::string& line) { return text.find(line + "\n") != std::string::npos; }

}  // namespace

TEST_CASE("hopf-3d scenario reports the curvature target") {
  Report r = run_scenario(scenario("hopf-3d"));
  CHECK(r.status == 0);
  std::string text = render_text(r);
  CHECK(has_line(text, "R(zeta) = mu*(1+mu^2)*em*ep"));
  CHECK(text.find("result: pass") != std::string::npos);
}

TEST_CASE("hopf-4dplus at the special parameter is flat and multiplicative") {
  ScenarioConfig c = scenario("hopf-4dplus");
  c.t = "-(1+mu)/(1-mu^3)";
  Report r = run_scenario(c);
  CHECK(r.status == 0);
  CHECK(has_line(render_text(r), "curvature = 0; multiplicative: yes"));
  c.t = "t";
  Report sym = run_scenario(c);
  CHECK(sym.status == 0);
  CHECK(sym.body["summary"].get<std::string>().find("; multiplicative: no") != std::string::npos);
}

TEST_CASE("line bundle: nonzero omega squared is a failing negative control") {
  ScenarioConfig c = scenario("line-bundle");
  c.lambda = "2";
  CHECK(run_scenario(c).status == 0);
  c.omega_sq = "nonzero";
  Report r = run_scenario(c);
  CHECK(r.status == 1);
  bool witness = false;
  for (const auto& conn : r.body["connections"])
    for (const auto& d : conn["defects"])
      if (d["kind"] == "multiplicativity" && !d["witness"].get<std::string>().empty()) witness = true;
  CHECK(witness);
}

TEST_CASE("classical and trivial scenarios pass") {
  CHECK(run_scenario(scenario("hopf-classical")).status == 0);
  ScenarioConfig c = scenario("trivial-default");
  CHECK(run_scenario(c).status == 0);
  c.potential = "i*e1";
  CHECK(run_scenario(c).status == 0);
}

TEST_CASE("mu spot checks agree with the symbolic identities") {
  ScenarioConfig c = scenario("hopf-3d");
  c.mu_value = "3/2";
  Report r = run_scenario(c);
  CHECK(r.status == 0);
  int spots = 0;
  for (const auto& q : r.body["quantities"])
    if (q.contains("spot_check")) {
      ++spots;
      CHECK(q["spot_check"] == "match");
    }
  CHECK(spots > 0);
}

TEST_CASE("reports are deterministic") {
  ScenarioConfig c = scenario("hopf-4dplus");
  CHECK(render_json(run_scenario(c)) == render_json(run_scenario(c)));
  ScenarioConfig e = scenario("hopf-3d");
  CHECK(render_json(export_data("relations", e)) == render_json(export_data("relations", e)));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run_scenario(scenario("hopf-5d")), InvalidInput);
  ScenarioConfig c = scenario("hopf-3d");
  c.cap = 1;
  CHECK_THROWS_AS(run_scenario(c), InvalidInput);
  c = scenario("hopf-3d");
  c.mode = "wedge";
  CHECK_THROWS_AS(run_scenario(c), InvalidInput);
  c = scenario("hopf-4dplus");
  c.t = "1/(";
  CHECK_THROWS_AS(run_scenario(c), Error);
  CHECK_THROWS_AS(run_suite("everything", ScenarioConfig{}), InvalidInput);
  CHECK_THROWS_AS(export_data("everything", scenario("hopf-3d")), InvalidInput);
}

TEST_CASE("verify suites") {
  ScenarioConfig c;
  c.group = "suq2";
  Report ax = run_suite("axioms", c);
  CHECK(ax.status == 0);
  CHECK(ax.body["totals"]["failed"] == 0);
  ScenarioConfig k;
  k.calculus = "4d+";
  CHECK(run_suite("calculus", k).status == 0);
  CHECK(run_suite("graded", k).status == 0);
  ScenarioConfig b;
  b.bundle = "hopf-3d";
  CHECK(run_suite("bundle", b).status == 0);
  CHECK(run_suite("connection", b).status == 0);
}

TEST_CASE("exports") {
  Report rel = export_data("relations", scenario("hopf-3d"));
  CHECK(rel.body["horizontal"].size() == 3);
  CHECK(rel.body["forms"].size() == 3);
  ScenarioConfig om = scenario("hopf-3d");
  om.degree = 0;
  om.kdeg = 2;
  CHECK(export_data("omegaM", om).body["basis"].size() == 4);
  Report cur = export_data("curvature", scenario("trivial-default"));
  CHECK(cur.body["curvature"]["zeta"] == "0");
}
