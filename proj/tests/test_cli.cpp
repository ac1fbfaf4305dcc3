#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ftik/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = ftik::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json first_json(const std::string& text) { return nlohmann::json::parse(text.substr(0, text.find('\n'))); }

const std::string kTrefoil = "O1+ U2+ O3+ U1+ O2+ U3+";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("phi on a one-arrow diagram") {
    const auto r = run({"phi", "--k", "1"}, "O1+ U1+\n");
    REQUIRE(r.code == ftik::cli::kOk);
    const auto j = first_json(r.out);
    CHECK(j["k"] == 1);
    CHECK(j["terms"] == nlohmann::json::parse(R"([{"diagram":"O1+ U1+","coeff":"1"}])"));
    CHECK(j["stats"].contains("table_entries"));
    CHECK(!j["stats"].contains("wall_ns"));
    CHECK(first_json(run({"phi", "--k", "1", "--timing"}, "O1+ U1+\n").out)["stats"].contains("wall_ns"));
  }

  TEST_CASE("fast and brute print the same terms") {
    const auto fast = first_json(run({"phi", "--k", "2", "--method", "fast"}, kTrefoil + "\n").out);
    const auto brute = first_json(run({"phi", "--k", "2", "--method", "brute"}, kTrefoil + "\n").out);
    CHECK(fast["terms"].dump() == brute["terms"].dump());
    CHECK(fast["terms"].size() == 3);
    CHECK(fast["method"] == "fast");
    CHECK(brute["method"] == "brute");
    const auto split = first_json(run({"phi", "--k", "2", "--e", "2"}, kTrefoil + "\n").out);
    CHECK(split["terms"].dump() == brute["terms"].dump());
    CHECK(split["e"] == 2);
  }

  TEST_CASE("k above n gives empty terms") {
    const auto r = run({"phi", "--k", "5"}, kTrefoil + "\n");
    CHECK(r.code == 0);
    CHECK(first_json(r.out)["terms"].empty());
  }

  TEST_CASE("one line per input, comments skipped, blank line is the empty diagram") {
    const auto r = run({"phi", "--k", "0"}, "# comment\nO1+ U1+\n\n");
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
  }

  TEST_CASE("phi up to k") {
    const auto j = first_json(run({"phi", "--k", "2", "--le"}, kTrefoil + "\n").out);
    int total = 0;
    for (const auto& t : j["terms"]) total += std::stoi(t["coeff"].get<std::string>());
    CHECK(total == 6);
  }

  TEST_CASE("parse errors name the line and token") {
    const auto r = run({"phi", "--k", "1"}, "O1+ U1+\n# skip\nO1+ X2+\n");
    CHECK(r.code == ftik::cli::kParseError);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(r.err.find("'X2+'") != std::string::npos);
    CHECK(run({"phi"}).code != 0);
    CHECK(run({"phi", "--k", "2", "--method", "slow"}).code != 0);
  }

  TEST_CASE("eval examples") {
    auto value = [](const std::string& line) {
      const auto r = run({"eval", "--functional", "v2"}, line + "\n");
      REQUIRE(r.code == 0);
      return first_json(r.out)["value"].get<std::string>();
    };
    CHECK(value(kTrefoil) == "1");
    CHECK(value("O1+ U1+") == "0");
    CHECK(value("") == "0");
    CHECK(first_json(run({"eval", "--functional", "v2"}, kTrefoil + "\n").out)["input"] == kTrefoil);
    CHECK(run({"eval", "--functional", "nope"}, kTrefoil + "\n").code == ftik::cli::kUnknownFunctional);
  }

  TEST_CASE("eval with a functional file") {
    const std::string path = "cli_test_functional.json";
    {
      std::ofstream f(path);
      f << R"({"k": 1, "include_phi0": true, "weights": [{"diagram": "O1+ U1+", "coeff": "1/2"}, {"diagram": "", "coeff": "1"}]})";
    }
    const auto r = run({"eval", "--functional", path}, kTrefoil + "\n");
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    CHECK(first_json(r.out)["value"] == "2");
  }

  TEST_CASE("verify examples") {
    const auto r = run({"verify", "--k", "3", "--n", "8", "--trials", "100", "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(r.out == "100/100 pass\n");
    CHECK(run({"verify", "--trials", "0"}).out == "0/0 pass\n");
    CHECK(run({"verify", "--n", "0", "--trials", "3"}).code == 0);
  }

  TEST_CASE("gen is deterministic") {
    const auto a = run({"gen", "--n", "3", "--count", "2", "--seed", "1"});
    const auto b = run({"gen", "--n", "3", "--count", "2", "--seed", "1"});
    CHECK(a.out == b.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 2);
    CHECK(run({"gen", "--n", "0", "--count", "1"}).out == "\n");
    CHECK(run({"gen", "--n", "3", "--count", "2", "--seed", "2"}).out != a.out);
  }

  TEST_CASE("phi output is byte stable") {
    const std::string input = run({"gen", "--n", "12", "--count", "3", "--seed", "4"}).out;
    CHECK(run({"phi", "--k", "3"}, input).out == run({"phi", "--k", "3"}, input).out);
  }

  TEST_CASE("bench writes the CSV header and one row per size") {
    const auto r = run({"bench", "--k", "2", "--nmin", "8", "--nmax", "32", "--steps", "3", "--method", "both",
                        "--reps", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n,k,method,e,f,wall_ns,table_entries,table_queries,terms\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
    CHECK(r.err.find("slope brute") != std::string::npos);
    CHECK(r.err.find("slope fast") != std::string::npos);
  }

  TEST_CASE("table selftest") {
    const auto r = run({"table-selftest", "--cases", "50"});
    CHECK(r.code == 0);
    CHECK(r.out == "dim 1: 50/50 pass\ndim 2: 50/50 pass\ndim 3: 50/50 pass\ndim 4: 50/50 pass\n");
  }
}
