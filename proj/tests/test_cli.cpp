#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toposqt/driver.hpp"
#include "toposqt/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>

using namespace toposqt;
using nlohmann::json;

namespace {

std::string scenario_path() {
  if (const char* env = std::getenv("TOPOSQT_SCENARIO")) return env;
  return "scenarios/spin.json";
}

json run_json(std::vector<std::string> args) {
  const CommandResult res = run_command(args);
  CAPTURE(res.err);
  REQUIRE(res.exit_code == 0);
  return json::parse(res.out);
}

}  // namespace

TEST_CASE("the spin scenario loads with resolved propositions") {
  const Scenario s = load_scenario(scenario_path());
  CHECK(s.dim == 4);
  CHECK(s.poset.size() == 14);
  // Interval propositions collapse to the expected spectral projectors.
  CHECK(s.proposition("SzIn13to23") == s.proposition("P1"));
  CHECK(s.proposition("SzInNeg3Neg1") == s.proposition("P4"));
  CHECK(s.proposition("SzInEmpty") == Projector::zero(4));
}

TEST_CASE("scenario validation failures carry names and positions") {
  try {
    load_scenario_text("{\"dim\": 4,", "inline");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == "ParseError");
    CHECK(std::string(e.what()).find("inline:1:") != std::string::npos);
  }

  const std::string dup = R"({
    "dim": 2, "field": "rational",
    "operators": {
      "A": {"projector": [["1","0"],["0","0"]]}
    },
    "states": {"A": {"vector": ["1","0"]}},
    "seeds": [{"name":"V","atoms":["A"]}]
  })";
  CHECK_THROWS_WITH_AS(load_scenario_text(dup), doctest::Contains("defined twice"), Error);

  const std::string bad_ref = R"({
    "dim": 2, "field": "rational",
    "operators": {"A": {"projector": [["1","0"],["0","0"]]}},
    "seeds": [{"name":"V","atoms":["A","B"]}]
  })";
  CHECK_THROWS_WITH_AS(load_scenario_text(bad_ref), doctest::Contains("unknown projector"),
                       Error);

  const std::string not_proj = R"({
    "dim": 2, "field": "rational",
    "operators": {"A": {"projector": [["1","1"],["1","1"]]}},
    "seeds": [{"name":"V","atoms":["A"]}]
  })";
  CHECK_THROWS_WITH_AS(load_scenario_text(not_proj), doctest::Contains("NotIdempotent"), Error);

  const std::string bad_field = R"({"dim": 2, "field": "float", "seeds": []})";
  CHECK_THROWS_WITH_AS(load_scenario_text(bad_field), doctest::Contains("rational"), Error);
}

TEST_CASE("truth-value reproduces the worked sieve") {
  const json out = run_json({"--scenario", scenario_path(), "truth-value", "SzInNeg3Neg1",
                             "psi", "--at", "V"});
  const json expected = json::array({"V_{P1+P4|P2+P3}", "V_{P2}", "V_{P3}", "V_{P2P3}"});
  CHECK(out.at("members") == expected);
  CHECK(out.at("totally_true") == false);
  CHECK(out.at("totally_false") == false);

  // Equivalent spelling through the raw projector name.
  const json direct =
      run_json({"--scenario", scenario_path(), "truth-value", "P4", "psi", "--at", "V"});
  CHECK(direct.at("members") == expected);

  // Density route with the probability-one threshold.
  const json density = run_json({"--scenario", scenario_path(), "truth-value", "SzIn13to23",
                                 "rho", "--at", "V"});
  CHECK(density.at("members") ==
        json::array({"V_{P1+P4|P2+P3}", "V_{P2}", "V_{P3}", "V_{P2P3}"}));
}

TEST_CASE("daseinise prints the worked matrices") {
  const json out =
      run_json({"--scenario", scenario_path(), "daseinise", "Sz", "--at", "V_{P2P3}"});
  CHECK(out.at("per_context").at("V_{P2P3}") ==
        json::array({json::array({"2", "0", "0", "0"}), json::array({"0", "0", "0", "0"}),
                     json::array({"0", "0", "0", "0"}), json::array({"0", "0", "0", "2"})}));
  const json inner =
      run_json({"--scenario", scenario_path(), "daseinise", "Sz", "--inner", "--at", "V_{P4}"});
  CHECK(inner.at("per_context").at("V_{P4}") ==
        json::array({json::array({"0", "0", "0", "0"}), json::array({"0", "0", "0", "0"}),
                     json::array({"0", "0", "0", "0"}), json::array({"0", "0", "0", "-2"})}));

  const json prop = run_json({"--scenario", scenario_path(), "daseinise", "SzIn13to23"});
  CHECK(prop.at("subobject").at("V") == json::array({0}));
  CHECK(prop.at("per_context").size() == 14);
}

TEST_CASE("pseudo-state, measure and prob-truth round the same numbers") {
  const json w = run_json({"--scenario", scenario_path(), "pseudo-state", "psi2"});
  CHECK(w.at("per_context").at("V") ==
        json::array({json::array({"0", "0", "0", "0"}), json::array({"0", "1", "0", "0"}),
                     json::array({"0", "0", "0", "0"}), json::array({"0", "0", "0", "0"})}));

  const json m = run_json({"--scenario", scenario_path(), "measure", "rho", "SzIn13to23"});
  CHECK(m.at("weight").at("V") == "1/2");
  CHECK(m.at("weight").at("V_{P2P3}") == "1");
  const json sigma = run_json({"--scenario", scenario_path(), "measure", "rho", "Sigma"});
  CHECK(sigma.at("weight").at("V_{P1}") == "1");

  const json p = run_json({"--scenario", scenario_path(), "prob-truth", "SzIn13to23", "rho",
                           "--root", "V,1"});
  CHECK(p.at("root").at("context") == "V");
  CHECK(p.at("cutoff").at("V") == "1/2");
  CHECK(p.at("cutoff").at("V_{P2P3}") == "1");
}

TEST_CASE("value-interval prints nested windows") {
  const json out =
      run_json({"--scenario", scenario_path(), "value-interval", "Sz", "V_{P4}:0"});
  CHECK(out.at("intervals").at("V_{P4}") == json::array({"0", "2"}));
  const json eig = run_json({"--scenario", scenario_path(), "value-interval", "Sz", "V:0"});
  CHECK(eig.at("intervals").at("V") == json::array({"2", "2"}));
  CHECK(eig.at("intervals").at("V_{P4}") == json::array({"0", "2"}));
}

TEST_CASE("covariance and global sections subcommands") {
  const json cov = run_json({"--scenario", scenario_path(), "covariance", "SzInNeg3Neg1",
                             "psi", "U23", "--at", "V"});
  CHECK(cov.at("equal") == true);
  const json ph = run_json({"--scenario", scenario_path(), "covariance", "SzInNeg3Neg1", "psi",
                            "Uphase", "--at", "V"});
  CHECK(ph.at("equal") == true);
  CHECK(ph.at("transported") == ph.at("transformed"));

  const json sections = run_json({"--scenario", scenario_path(), "global-sections"});
  CHECK(sections.at("count") == 4);
}

TEST_CASE("ks-check on the built-in system") {
  const json out = run_json({"ks-check", "kernaghan"});
  CHECK(out.at("colorable") == false);
  CHECK(out.at("certificate").at("kind") == "parity");
  CHECK(out.at("certificate").at("basis_count") == 11);
}

TEST_CASE("exit codes distinguish domain errors from usage errors") {
  const CommandResult usage = run_command({"no-such-command"});
  CHECK(usage.exit_code == 2);

  const CommandResult domain =
      run_command({"--scenario", "does-not-exist.json", "contexts"});
  CHECK(domain.exit_code == 1);
  const json err = json::parse(domain.err);
  CHECK(err.at("error").at("kind") == "ParseError");

  const CommandResult unknown =
      run_command({"--scenario", scenario_path(), "truth-value", "nope", "psi"});
  CHECK(unknown.exit_code == 1);
  CHECK(json::parse(unknown.err).at("error").at("kind") == "ValidationError");

  const CommandResult r_on_pure = run_command(
      {"--scenario", scenario_path(), "truth-value", "P4", "psi", "--r", "1/2"});
  CHECK(r_on_pure.exit_code == 1);

  const CommandResult bad_point = run_command(
      {"--scenario", scenario_path(), "value-interval", "Sz", "V_{P4}:x"});
  CHECK(bad_point.exit_code == 1);
  CHECK(json::parse(bad_point.err).at("error").at("kind") == "ValidationError");

  const CommandResult help = run_command({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("truth-value") != std::string::npos);
}

TEST_CASE("dot and table formats render") {
  const CommandResult dot =
      run_command({"--scenario", scenario_path(), "contexts", "--format", "dot"});
  REQUIRE(dot.exit_code == 0);
  CHECK(dot.out.find("digraph contexts") != std::string::npos);

  const CommandResult sieve_dot = run_command({"--scenario", scenario_path(), "truth-value",
                                               "P4", "psi", "--at", "V", "--format", "dot"});
  REQUIRE(sieve_dot.exit_code == 0);
  CHECK(sieve_dot.out.find("lightblue") != std::string::npos);

  const CommandResult table =
      run_command({"--scenario", scenario_path(), "measure", "rho", "Sigma", "--format",
                   "table"});
  REQUIRE(table.exit_code == 0);
  CHECK(table.out.find("weight") != std::string::npos);

  const CommandResult no_dot = run_command({"--scenario", scenario_path(), "measure", "rho",
                                            "Sigma", "--format", "dot"});
  CHECK(no_dot.exit_code == 1);
}

TEST_CASE("json outputs round-trip through their schema") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"--scenario", scenario_path(), "contexts"},
        std::vector<std::string>{"--scenario", scenario_path(), "truth-value", "P4", "psi",
                                 "--at", "V"},
        std::vector<std::string>{"--scenario", scenario_path(), "measure", "rho", "Sigma"},
        std::vector<std::string>{"ks-check", "kernaghan"}}) {
    const CommandResult res = run_command(args);
    REQUIRE(res.exit_code == 0);
    const json parsed = json::parse(res.out);
    CHECK(parsed.dump(2) + "\n" == res.out);  // canonical dump is the output
  }
}
