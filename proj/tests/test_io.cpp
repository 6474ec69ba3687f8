#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "fixtures_ex25.hpp"
#include "ncfm/io.hpp"

using namespace ncfm;
using Q = Rational;
using MQ = Matrix<Q>;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(NCREAL_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/ncfm_io_") + name;
  std::ofstream f(path);
  f << content;
  return path;
}

const char* kYc = R"([
  {"rows":2,"cols":2,"data":[["0","1"],["1","0"]]},
  {"rows":2,"cols":2,"data":[["1","0"],["0","-1"]]}
])";

}  // namespace

TEST_CASE("matrix serialization round-trips with p/q strings") {
  MQ m(2, 3);
  m(0, 0) = Q(-7, 3);
  m(1, 2) = Q(5);
  json j = to_json(m);
  CHECK(j["data"][0][0] == "-7/3");
  CHECK(j["data"][1][2] == "5");
  CHECK(matrix_from_json<Q>(j) == m);

  Matrix<double> f(1, 2);
  f(0, 0) = 0.5;
  f(0, 1) = -3.25;
  json jf = to_json(f);
  CHECK(jf["data"][0][0] == 0.5);
  CHECK(matrix_from_json<double>(jf) == f);

  CHECK_THROWS(matrix_from_json<Q>(json::parse(R"({"rows":1,"cols":1,"data":[[0.5]]})")));
}

TEST_CASE("realization and descriptor JSON round-trips are structural") {
  FMRealization<Q> r = fixtures::ex25_minimal();
  FMRealization<Q> back = realization_from_json<Q>(to_json(r));
  CHECK(back.L == r.L);
  CHECK(back.D == r.D);
  CHECK(back.C == r.C);
  for (int k = 0; k < 2; ++k) {
    CHECK(back.A[k] == r.A[k]);
    CHECK(back.B[k] == r.B[k]);
  }

  DescriptorRealization<Q> dsc = fm_to_descriptor(r);
  DescriptorRealization<Q> dsc_back = descriptor_from_json<Q>(to_json(dsc));
  CHECK(dsc_back.L == dsc.L);
  CHECK(dsc_back.C == dsc.C);
  CHECK(*dsc_back.B == *dsc.B);
  CHECK(!dsc_back.metric.has_value());
  for (int k = 0; k < 2; ++k) CHECK(dsc_back.A[k] == dsc.A[k]);
}

TEST_CASE("taylor table serialization lists words in canonical order") {
  auto t = taylor_table(parse("x1*x2", 2), fixtures::centre_yc(), 2);
  json j = to_json(*t);
  CHECK(j["coefficients"][0]["word"] == json::array());
  CHECK(j["coefficients"][1]["word"] == json::array({1}));
  CHECK(j["coefficients"][2]["word"] == json::array({2}));
  CHECK(j["coefficients"][3]["word"] == json::array({1, 1}));
  CHECK(j["coefficients"].size() == 1 + 2 + 4);
}

TEST_CASE("cli: realize reproduces the worked tuple and minimizes to L=6") {
  std::string yc = write_temp("yc.json", kYc);
  auto full = run_cli("realize --expr \"(x1*x2 - x2*x1)^-1\" --centre " + yc);
  REQUIRE(full.exit_code == 0);
  json j = json::parse(full.out);
  CHECK(j["realization"]["L"] == 8);
  FMRealization<Q> r = realization_from_json<Q>(j["realization"]);
  FMRealization<Q> expected = fixtures::ex25_full();
  CHECK(r.D == expected.D);
  CHECK(r.C == expected.C);
  for (int k = 0; k < 2; ++k) CHECK(r.A[k] == expected.A[k]);

  auto reduced = run_cli("realize --expr \"(x1*x2 - x2*x1)^-1\" --centre " + yc + " --minimize");
  REQUIRE(reduced.exit_code == 0);
  json jr = json::parse(reduced.out);
  CHECK(jr["realization"]["L"] == 6);
  CHECK(jr["kalman_report"]["reduced_L"] == 6);

  auto constant = run_cli("realize --expr 3 --d 2 --centre " + yc);
  CHECK(json::parse(constant.out)["realization"]["L"] == 1);
}

TEST_CASE("cli: eval agrees between expression and realization routes") {
  std::string yc = write_temp("yc.json", kYc);
  auto direct = run_cli("eval --expr \"(x1*x2 - x2*x1)^-1\" --point " + yc);
  REQUIRE(direct.exit_code == 0);
  json j = json::parse(direct.out);
  CHECK(j["value"]["data"][0][1] == "1/2");

  auto realized = run_cli("realize --expr \"(x1*x2 - x2*x1)^-1\" --centre " + yc + " --minimize");
  std::string rfile = write_temp("rmin.json", json::parse(realized.out)["realization"].dump());
  auto via = run_cli("eval --realization " + rfile + " --point " + yc);
  REQUIRE(via.exit_code == 0);
  CHECK(json::parse(via.out)["value"] == j["value"]);

  // identity point: outside the domain, exit 4
  std::string ones = write_temp("ones.json", R"([
    {"rows":2,"cols":2,"data":[["1","0"],["0","1"]]},
    {"rows":2,"cols":2,"data":[["1","0"],["0","1"]]}
  ])");
  auto out = run_cli("eval --expr \"(x1*x2 - x2*x1)^-1\" --point " + ones);
  CHECK(out.exit_code == 4);
}

TEST_CASE("cli: exit codes for parse errors and centre failures") {
  std::string yc = write_temp("yc.json", kYc);
  CHECK(run_cli("realize --expr \"x1 + \" --centre " + yc).exit_code == 2);
  CHECK(run_cli("realize --expr \"x3\" --centre " + yc).exit_code == 2);
  std::string bad = write_temp("bad.json", "{not json");
  CHECK(run_cli("realize --expr x1 --centre " + bad).exit_code == 2);

  std::string ones = write_temp("ones.json", R"([
    {"rows":2,"cols":2,"data":[["1","0"],["0","1"]]},
    {"rows":2,"cols":2,"data":[["1","0"],["0","1"]]}
  ])");
  CHECK(run_cli("realize --expr \"(x1*x2 - x2*x1)^-1\" --centre " + ones).exit_code == 3);

  // hermitian on the commutator inverse: exit 6
  auto realized = run_cli("realize --expr \"(x1*x2 - x2*x1)^-1\" --centre " + yc + " --minimize");
  std::string rfile = write_temp("rmin6.json", json::parse(realized.out)["realization"].dump());
  CHECK(run_cli("hermitian --realization " + rfile).exit_code == 6);

  // equiv with an impossible budget: inconclusive, exit 5
  CHECK(run_cli("equiv --expr1 \"(x1*x2 - x2*x1)^-1\" --expr2 x1 --seed 3 --budget 1 --sizes 1")
            .exit_code == 5);
}

TEST_CASE("cli: identical inputs and seed give byte-identical output") {
  std::string cmd = "equiv --expr1 \"(x1 + x2)^-1\" --expr2 \"x1^-1*(1 + x2*x1^-1)^-1\" --seed 42";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["equivalent"] == true);

  auto c = run_cli("cohn --expr1 \"(x1 + x2)^-1\" --expr2 \"x1^-1*(1 + x2*x1^-1)^-1\" "
                   "--algebra matn:2 --samples 20 --seed 9");
  auto d = run_cli("cohn --expr1 \"(x1 + x2)^-1\" --expr2 \"x1^-1*(1 + x2*x1^-1)^-1\" "
                   "--algebra matn:2 --samples 20 --seed 9");
  REQUIRE(c.exit_code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("cli: taylor and hermitian and descriptor emit well-formed JSON") {
  std::string yc = write_temp("yc.json", kYc);
  auto taylor = run_cli("taylor --expr \"x1*x2\" --centre " + yc + " --order 2");
  REQUIRE(taylor.exit_code == 0);
  CHECK(json::parse(taylor.out)["order"] == 2);

  std::string yh = write_temp("yh.json", R"([
    {"rows":2,"cols":2,"data":[["1","0"],["0","2"]]},
    {"rows":2,"cols":2,"data":[["0","1"],["1","0"]]}
  ])");
  auto realized = run_cli("realize --expr \"(x1*x2 + x2*x1)^-1\" --centre " + yh + " --minimize");
  std::string rfile = write_temp("hmin.json", json::parse(realized.out)["realization"].dump());
  auto herm = run_cli("hermitian --realization " + rfile);
  REQUIRE(herm.exit_code == 0);
  json hj = json::parse(herm.out);
  CHECK(hj["hermitian"] == true);
  CHECK(hj["kernel_image_identities"] == true);
  CHECK(hj["descriptor"]["L"] == hj["structure"]["S"]["rows"].get<int>() + 2);

  auto dsc = run_cli("descriptor --realization " + rfile + " --direction fm2d");
  REQUIRE(dsc.exit_code == 0);
  json dj = json::parse(dsc.out);
  std::string dfile = write_temp("dsc.json", dj.dump());
  auto back = run_cli("descriptor --realization " + dfile + " --direction d2fm");
  REQUIRE(back.exit_code == 0);
  CHECK(json::parse(back.out)["L"] == dj["L"]);
}
