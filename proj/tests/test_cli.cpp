#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cwb/cli.hpp"
#include "doctest.h"

using nlohmann::json;
using cwb::cli::run_command;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json run_json(std::vector<std::string> args, int expected_exit = 0) {
  args.push_back("--json");
  const auto r = run_command(args);
  INFO(r.out << r.err);
  CHECK(r.exit_code == expected_exit);
  return json::parse(r.out);
}

void check_golden(const std::vector<std::string>& args, const std::string& file, int expected_exit = 0) {
  auto a = args;
  a.push_back("--json");
  const auto r = run_command(a);
  CHECK(r.exit_code == expected_exit);
  CHECK(r.out == slurp(std::string(CWB_GOLDEN_DIR) + "/" + file));
}

int exit_status(const std::string& args) {
  const std::string cmd = std::string(CWB_BINARY) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

}  // namespace

TEST_CASE("golden outputs are byte-stable") {
  check_golden({"calkin-eq", "w^w+3", "w^w*5+3"}, "calkin_eq.json");
  check_golden({"ba-eq", "intalg(w)", "intalg(w*2)"}, "ba_eq_intalg.json");
  check_golden({"ba-eq", "fincof", "P(omega)"}, "ba_eq_fincof.json");
  check_golden({"ba-eq", "P(omega)/fin", "free"}, "ba_eq_corona.json");
  check_golden({"realize", "--points", "2", "--instance", "orth"}, "realize_orth.json", 3);
  check_golden({"interpolate", "--atoms", "2", "--below", "0b01", "--above", "0b11"}, "interpolate_notfound.json", 3);
  check_golden({"ord-arith", "add", "w", "w^^2"}, "parse_error.json", 2);
}

TEST_CASE("equivalence verdicts") {
  auto j = run_json({"calkin-eq", "w^w+3", "w^w*5+3"});
  CHECK(j["verdict"] == true);
  j = run_json({"calkin-eq", "w^w*7+w", "w^w+w"});
  CHECK(j["verdict"] == true);
  j = run_json({"calkin-eq", "1", "2"});
  CHECK(j["verdict"] == false);
  j = run_json({"ba-eq", "P(omega)/fin", "free"});
  CHECK(j["verdict"] == true);
  CHECK(j["value"]["cstar_equiv"] == true);
}

TEST_CASE("conflict notes for the two documented cases") {
  for (const auto& [a, b, ta, tb] : {std::tuple{"intalg(w)", "intalg(w*2)", "(1, 1, false)", "(1, 2, false)"},
                                      std::tuple{"fincof", "P(omega)", "(1, 1, false)", "(1, 0, true)"}}) {
    const auto j = run_json({"ba-eq", a, b});
    CHECK(j["verdict"] == false);
    CHECK(j["value"]["a"]["invariant"]["triple"] == ta);
    CHECK(j["value"]["b"]["invariant"]["triple"] == tb);
    REQUIRE(j.contains("notes"));
    CHECK(j["notes"][0]["kind"] == "conflict");
    CHECK(j["notes"][0]["cites"] == "cor:elementaryEquivalence");
    CHECK(j["notes"][0]["predicted"] == true);
    CHECK(j["notes"][0]["computed"] == false);
  }
  CHECK_FALSE(run_json({"ba-eq", "P(omega)/fin", "free"}).contains("notes"));
}

TEST_CASE("cross-checks agree with verdicts") {
  const std::vector<std::pair<std::string, std::string>> ordinals{
      {"w^w+3", "w^w*5+3"}, {"3", "w^w+3"}, {"w", "w*2"}, {"w^2", "w^2+w"}, {"w^w", "w^(w+1)"}, {"5", "5"}};
  for (const auto& [a, b] : ordinals) {
    const auto j = run_json({"ord-eq", a, b});
    for (const auto& c : j["cross_checks"]) {
      if (c.contains("agrees")) CHECK(c["agrees"] == true);
    }
  }
  // w^(w+1) is beyond the game solver.
  const auto far = run_json({"calkin-eq", "w^w", "w^(w+1)"});
  CHECK(far["verdict"] == true);
  CHECK(far["cross_checks"][0].contains("skipped"));

  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto j = run_json({"ba-eq", "finite(" + std::to_string(m) + ")", "finite(" + std::to_string(n) + ")"});
      CHECK(j["verdict"] == (m == n));
      REQUIRE(j.contains("cross_checks"));
      for (const auto& c : j["cross_checks"]) CHECK(c["agrees"] == true);
    }
  }
}

TEST_CASE("verbs produce expected values") {
  CHECK(run_json({"ord-arith", "add", "1", "w"})["value"] == "w");
  CHECK(run_json({"ord-arith", "mul", "w+1", "w"})["value"] == "w^2");
  CHECK(run_json({"ord-arith", "cmp", "w^w", "w^2*9+w*9+9"})["value"] == "GT");
  CHECK(run_json({"ord-arith", "sub", "w", "w*2+1"})["value"] == "w + 1");
  CHECK(run_json({"ord-arith", "split", "w^w*2+w^2*3+5"})["value"]["quotient"] == "2");
  CHECK(run_json({"ef", "orders", "3", "4", "--rank", "2"})["verdict"] == true);
  CHECK(run_json({"ef", "orders", "3", "4", "--rank", "3"})["verdict"] == false);
  CHECK(run_json({"ba-invariants", "intalg(w^2)"})["value"]["invariant"]["triple"] == "(2, 1, false)");
  CHECK(run_json({"ba-enumerate", "3"})["value"].size() == 3);
  const auto st = run_json({"stone", "4"});
  CHECK(st["value"]["algebra_round_trip"] == true);
  CHECK(st["value"]["space_round_trip"] == true);
  CHECK(run_json({"translate", "forall x. x /\\ x = x"})["value"] == "(sup x :proj (norm (- (* x x) x)))");
  const auto tr = run_json({"translate", "exists x. x != 0 & x != 1", "--points", "1"});
  CHECK(tr["cross_checks"][0]["fo_true"] == false);
  CHECK(tr["cross_checks"][0]["agrees"] == true);
  const auto ce = run_json({"ceval", "(inf x :ball (norm (- x (star x))))", "--points", "2", "--tol", "1e-3"});
  CHECK(ce["certificate"]["lower"].get<double>() <= 0.0);
  CHECK(ce["certificate"]["upper"].get<double>() <= 1e-3);
  CHECK(run_json({"jspec", "0,1,2", "5,5,5"})["value"] == json::array({"[0, 5]", "[1, 5]", "[2, 5]"}));
  const auto fm = run_json({"fmember", "0,1,2", "--lambda", "5"});
  CHECK(fm["verdict"] == false);
  CHECK(fm["value"]["F"] == 1.0);
  const auto code = run_json({"code", "0.3, -0.2+0.7i, i", "--m", "8", "--reconstruct"});
  CHECK(code["certificate"]["error"].get<double>() <= 2.0 / 8);
  CHECK(run_json({"interpolate", "--below", "0", "--above", "top"})["value"] == "0 | 10");
  CHECK(run_json({"interpolate", "--atoms", "3", "--below", "0", "--above", "0b111"})["value"] == json::array({0}));
  CHECK(run_json({"orth", "--points", "5"})["value"]["size"] == 5);
  const auto re = run_json({"realize", "--points", "2", "--cond", "norm(x0) in {1}", "--cond", "norm([1, 0]*x0) in {0}"});
  CHECK(re["verdict"] == "Realized");
}

TEST_CASE("exit codes") {
  CHECK(run_command({"ba-eq", "free", "P(omega)"}).exit_code == 0);
  CHECK(run_command({"ba-eq", "free", "P(omega"}).exit_code == 2);
  CHECK(run_command({"ba-eq", "intalg(w^w)", "free"}).exit_code == 2);
  CHECK(run_command({"frobnicate"}).exit_code == 2);
  CHECK(run_command({"orth", "--points", "9"}).exit_code == 2);
  CHECK(run_command({"ord-arith", "pow", "2", "w*64"}).exit_code == 0);
  CHECK(run_command({"ord-arith", "pow", "99999", "99999"}).exit_code == 4);
  CHECK(run_command({"realize", "--points", "2", "--instance", "orth", "--budget", "3"}).exit_code == 4);
  CHECK(run_command({"ceval", "(sup x :ball (norm x))", "--points", "6", "--budget", "10"}).exit_code == 4);
  CHECK(run_command({"ceval", "(norm y)", "--points", "2"}).exit_code == 2);
  CHECK(run_command({"ba-enumerate", "20000"}).exit_code == 4);
  CHECK(run_command({"--help"}).exit_code == 0);

  // Budget errors still carry the best enclosure found.
  const auto r = run_command({"ceval", "(sup x :ball (norm x))", "--points", "6", "--budget", "10", "--json"});
  const auto j = json::parse(r.out);
  CHECK(j["error"]["kind"] == "resource");
  CHECK(j["certificate"]["lower"].get<double>() <= 1.0);
  CHECK(j["certificate"]["upper"].get<double>() >= 1.0);
}

TEST_CASE("the installed binary reports the same exit codes") {
  CHECK(exit_status("calkin-eq 'w^w+3' 'w^w*5+3'") == 0);
  CHECK(exit_status("ord-arith add w 'w^^2'") == 2);
  CHECK(exit_status("interpolate --atoms 2 --below 0b01 --above 0b11") == 3);
  CHECK(exit_status("realize --points 2 --instance orth --budget 3") == 4);
}

TEST_CASE("--out writes the document to a file") {
  const std::string path = "cli_out_test.json";
  const auto r = run_command({"orth", "--points", "2", "--json", "--out", path});
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(json::parse(slurp(path))["value"]["size"] == 2);
  std::remove(path.c_str());
}
