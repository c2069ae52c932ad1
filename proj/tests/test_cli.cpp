#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_util.h"

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

std::string temp_file(const std::string& tag) {
  return std::string("cli_test_") + tag + ".tmp";
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out = temp_file("stdout");
  const std::string cmd = env + std::string(SUBGEOM_CLI_PATH) + " " + args +
                          " > " + out + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(out, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out.c_str());
#ifdef _WIN32
  return {rc, buf.str()};
#else
  return {WEXITSTATUS(rc), buf.str()};
#endif
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string csv_value(const std::string& text, const std::string& field) {
  for (const auto& row : parse_csv(text)) {
    if (row.size() == 2 && row[0] == field) return row[1];
  }
  return "";
}

std::string write_spec(const std::string& tag, const std::string& body) {
  const std::string path = temp_file(tag + "_spec");
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("rates table") {
  const auto constant = run_cli("rates --alpha 0 --beta 1 --eps-b 0.5 --n 8");
  CHECK(constant.exit_code == 0);
  const auto rows = parse_csv(constant.output);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] ==
        std::vector<std::string>{"n", "r", "delta", "h", "h_inv"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0));
  }

  const auto poly = run_cli("rates --alpha 0.5 --beta 1 --eps-b 0.5 --n 6");
  const auto prows = parse_csv(poly.output);
  REQUIRE(prows.size() == 8);
  CHECK(prows[7][0] == "6");
  CHECK(std::stod(prows[7][1]) == doctest::Approx(2.5));
}

TEST_CASE("certify subcommand") {
  const auto res =
      run_cli("certify --spec " + fixture_path("two_state.json"));
  CHECK(res.exit_code == 0);
  CHECK(std::stod(csv_value(res.output, "eps_nu")) == doctest::Approx(0.7));
  CHECK(std::stod(csv_value(res.output, "b_v")) == doctest::Approx(0.8));

  const std::string flat = write_spec("flat",
                                      R"({"schema_version":1,"name":"flat",
  "kernels":[[[0.7,0.3],[0.4,0.6]]],"v":[1.0,1.0],"set_c":[0],
  "alpha":0.0,"beta":0.5,"f":[1,-1]})");
  const auto bad = run_cli("certify --spec " + flat);
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("kernel,state,margin,what") != std::string::npos);
  std::remove(flat.c_str());
}

TEST_CASE("constants subcommand") {
  const auto res =
      run_cli("constants --spec " + fixture_path("two_state.json"));
  CHECK(res.exit_code == 0);
  // Constant phi: c_star = 1/eps_nu (Remark (ii) branch).
  const double eps_nu = 0.7;
  CHECK(std::stod(csv_value(res.output, "c_star")) ==
        doctest::Approx(1.0 / eps_nu));
  const double c = std::stod(csv_value(res.output, "c"));
  // Hand evaluation of the ledger for b_v=0.8, eps_b=0.5, phi=0.5.
  const double bar_b = 2.0 * 0.8 + 0.5 * 0.5;
  const double expected =
      (2.0 / 0.25) * (2.0 + bar_b / eps_nu +
                      (1.0 / eps_nu) * bar_b * 1.0 * (1.0 + 1.0 / 0.25));
  CHECK(c == doctest::Approx(expected));
}

TEST_CASE("verify subcommand") {
  const auto ok = run_cli("verify --spec " + fixture_path("two_state.json") +
                          " --suite all");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.rfind("check_id,chain_id,pair,lhs,tail,rhs,slack,pass", 0) ==
        0);
  CHECK(ok.output.find(",0\n") == std::string::npos);  // no failing rows

  const std::string corrupt = write_spec("corrupt",
                                         R"({"schema_version":1,
  "kernels":[[[0.7,0.4],[0.4,0.6]]],"v":[1.0,2.0],"set_c":[0,1],
  "alpha":0.0,"beta":0.5})");
  const auto bad = run_cli("verify --spec " + corrupt + " --suite all");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("row sum") != std::string::npos);
  std::remove(corrupt.c_str());

  const std::string const_f = write_spec("constf",
                                         R"({"schema_version":1,"name":"cf",
  "kernels":[[[0.7,0.3],[0.4,0.6]]],"v":[1.0,2.0],"set_c":[0,1],
  "alpha":0.0,"beta":0.5,"f":[3.0,3.0],"xi":1.0})");
  const auto zero = run_cli("verify --spec " + const_f + " --suite theorem");
  CHECK(zero.exit_code == 0);
  for (const auto& row : parse_csv(zero.output)) {
    if (row.size() == 8 && row[0] != "check_id") {
      CHECK(std::stod(row[3]) == doctest::Approx(0.0));
    }
  }
  std::remove(const_f.c_str());
}

TEST_CASE("simulate subcommand is byte-deterministic") {
  const std::string args = "simulate --spec " +
                           fixture_path("birth_death.json") +
                           " --replicates 5000 --seed 99 --x 4 --x2 7";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.rfind("stat,mean,variance,std_error", 0) == 0);

  const auto threaded = run_cli(args, "SUBGEOM_THREADS=3 ");
  CHECK(threaded.output == a.output);

  const auto other = run_cli("simulate --spec " +
                             fixture_path("birth_death.json") +
                             " --replicates 5000 --seed 100 --x 4 --x2 7");
  CHECK(other.output != a.output);
}
