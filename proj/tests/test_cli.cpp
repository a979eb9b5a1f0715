#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

using json = nlohmann::json;

namespace {

std::string binary_path() {
  const char* env = std::getenv("QCUT_BIN");
  REQUIRE_MESSAGE(env != nullptr, "QCUT_BIN must point at the CLI binary");
  return env;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = binary_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("gamma of named gates") {
  const RunResult r = run("gamma CNOT");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(std::abs(doc.at("gamma").get<double>() - 3.0) <= 1e-9);

  const RunResult swap = run("gamma SWAP CZ");
  REQUIRE(swap.exit_code == 0);
  const json sdoc = json::parse(swap.out);
  CHECK(std::abs(sdoc.at("gamma").at(0).get<double>() - 7.0) <= 1e-9);
  CHECK(std::abs(sdoc.at("gamma").at(1).get<double>() - 3.0) <= 1e-9);
}

TEST_CASE("gamma parallel mode") {
  const RunResult r = run("gamma --mode parallel CNOT CRX:3.14159");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  // 3 + 4 sin(theta/2) just below theta = pi
  CHECK(doc.at("gamma").get<double>() ==
        doctest::Approx(3 + 4 * std::sin(3.14159 / 2)).epsilon(1e-9));
  CHECK(doc.at("product_of_singles").get<double>() > doc.at("gamma").get<double>());
}

TEST_CASE("gamma of an identity matrix file") {
  const std::string path = tmp_path("identity.json");
  {
    std::ofstream f(path);
    f << "[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],"
         "[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]";
  }
  const RunResult r = run("gamma @" + path);
  REQUIRE(r.exit_code == 0);
  CHECK(std::abs(json::parse(r.out).at("gamma").get<double>() - 1.0) <= 1e-9);
  std::remove(path.c_str());
}

TEST_CASE("malformed input exits with code two") {
  const std::string path = tmp_path("bad.json");
  {
    std::ofstream f(path);
    f << "[[1,2],[3]]";
  }
  CHECK(run("gamma @" + path).exit_code == 2);
  CHECK(run("gamma NOSUCHGATE").exit_code == 2);
  CHECK(run("kak CRX:notanangle").exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("kak output is deterministic and self-consistent") {
  const RunResult a = run("kak HAAR:42");
  const RunResult b = run("kak HAAR:42");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const json doc = json::parse(a.out);
  CHECK(doc.at("reconstruction_residual").get<double>() < 1e-9);

  const json cnot = json::parse(run("kak CNOT").out);
  CHECK(std::abs(cnot.at("abs_u").at(0).get<double>() - 0.7071) <= 1e-4);
  CHECK(std::abs(cnot.at("abs_u").at(1).get<double>() - 0.7071) <= 1e-4);
  CHECK(std::abs(cnot.at("abs_u").at(2).get<double>()) <= 1e-6);
}

TEST_CASE("decompose, then simulate from the file") {
  const std::string qpd_path = tmp_path("cnot_qpd.json");
  const RunResult d = run("decompose CNOT --out " + qpd_path);
  REQUIRE(d.exit_code == 0);
  const json doc = json::parse(d.out);
  CHECK(doc.at("schema") == "qpd-v1");
  CHECK(doc.at("terms").size() == 4);
  CHECK(std::abs(doc.at("one_norm").get<double>() - 3.0) <= 1e-9);
  CHECK(doc.at("verification").at("pass").get<bool>());

  const RunResult s = run("simulate " + qpd_path +
                          " --state +0 --observable ZZ --shots 20000 --seed 5");
  REQUIRE(s.exit_code == 0);
  const json sim = json::parse(s.out);
  CHECK(std::abs(sim.at("exact_term_sum").get<double>() - 1.0) <= 1e-9);
  CHECK(std::abs(sim.at("mean").get<double>() - 1.0) <=
        4 * sim.at("stderr").get<double>());
  CHECK(sim.at("gamma_used").get<double>() == doctest::Approx(3.0));

  const RunResult s2 = run("simulate " + qpd_path +
                           " --state +0 --observable ZZ --shots 20000 --seed 5");
  CHECK(s.out == s2.out);
  std::remove(qpd_path.c_str());
}

TEST_CASE("parallel decompose reports the joint cost") {
  const RunResult r = run("decompose --mode parallel CNOT CNOT");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(std::abs(doc.at("one_norm").get<double>() - 7.0) <= 1e-9);
  CHECK(doc.at("verification").at("pass").get<bool>());
}

TEST_CASE("blackbox command") {
  const std::string plan_path = tmp_path("plan.json");
  {
    std::ofstream f(plan_path);
    f << R"({"schema":"bbplan-v1","sys_wires_a":1,"sys_wires_b":1,
            "gates":[{"spec":"CNOT"},{"spec":"CRX:pi/2"}],
            "slots":["gate:0","box:0","gate:1"]})";
  }
  const RunResult r =
      run("blackbox --plan " + plan_path + " --box identity --state +0 --observable ZZ");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("pass").get<bool>());
  CHECK(doc.at("abs_error").get<double>() <= 1e-8);
  CHECK(doc.at("overhead").get<double>() ==
        doctest::Approx(3 + 4 * std::sin(M_PI / 4)).epsilon(1e-9));

  const RunResult rb = run("blackbox --plan " + plan_path +
                           " --box random:7 --state +0 --observable ZZ");
  REQUIRE(rb.exit_code == 0);
  CHECK(json::parse(rb.out).at("pass").get<bool>());

  const RunResult shots =
      run("blackbox --plan " + plan_path +
          " --box identity --state +0 --observable ZZ --shots 400 --seed 2");
  REQUIRE(shots.exit_code == 0);
  CHECK(json::parse(shots.out).contains("mean"));
  std::remove(plan_path.c_str());
}

TEST_CASE("haar survey emits a parseable csv") {
  const std::string csv_path = tmp_path("hist.csv");
  const RunResult r = run("haar-survey --samples algo" /* bad flag value */);
  CHECK(r.exit_code != 0);

  const RunResult ok =
      run("haar-survey --samples 20000 --seed 3 --csv " + csv_path + " --workers 2");
  REQUIRE(ok.exit_code == 0);
  const json doc = json::parse(ok.out);
  CHECK(doc.at("mean").get<double>() > 5.5);
  CHECK(doc.at("mean").get<double>() < 5.9);
  CHECK(doc.at("min").get<double>() >= 1.0);
  CHECK(doc.at("max").get<double>() <= 7.0);
  CHECK(doc.at("scaling").size() == 10);

  std::ifstream f(csv_path);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "bin_left,bin_right,count,frequency");
  int rows = 0;
  std::string line, last;
  while (std::getline(f, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
    last = line;
  }
  CHECK(rows == 200);
  CHECK(last.rfind("# samples=20000", 0) == 0);

  const RunResult again =
      run("haar-survey --samples 20000 --seed 3 --workers 1");
  CHECK(json::parse(again.out).at("mean") == doc.at("mean"));
  std::remove(csv_path.c_str());
}
