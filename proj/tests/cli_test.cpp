#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs the report binary with the given arguments, capturing both streams.
RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/hvp_cli_stdout.txt";
  const std::string err_path = "/tmp/hvp_cli_stderr.txt";
  const std::string command =
      std::string("'") + HVP_REPORT_BIN + "' " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(command.c_str());
  RunResult result;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::string write_config(const std::string& text) {
  const std::string path = "/tmp/hvp_cli_config.txt";
  std::ofstream out(path);
  out << text;
  return path;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("default invocation prints the full table and succeeds") {
  const auto r = run_cli("");
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  // header + 24 grid rows + the plateau caveat
  REQUIRE(count_lines(r.out) == 26);
  REQUIRE(r.out.find("0.501248") != std::string::npos);
  REQUIRE(r.out.find("note:") != std::string::npos);
  REQUIRE(r.err.empty());
}

TEST_CASE("csv output carries the fixed header") {
  const auto r = run_cli("--format csv --oracle off --states 0 --lambdas 0.005");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.rfind("n,lambda,E4,E_3_3,E_3_4,flag_3_3,flag_3_4,eq13,oracle,"
                      "oracle_converged,max_disc\n", 0) == 0);
  REQUIRE(count_lines(r.out) == 2);
  REQUIRE(r.out.find("\n0,0.005") != std::string::npos);
}

TEST_CASE("csv mode moves the plateau caveat to stderr") {
  const auto r = run_cli("--format csv --states 0 --lambdas 0.01");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("note:") == std::string::npos);
  REQUIRE(r.err.find("not variational bounds") != std::string::npos);
}

TEST_CASE("a flagged cell turns into exit code 2") {
  const auto r = run_cli("--states 0 --lambdas 1.999 --pade 1:0 --oracle off");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.out.find("pole-contaminated") != std::string::npos);
}

TEST_CASE("an order too small for the requested approximants is refused") {
  const auto r = run_cli("--order 5");
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.err.find("config error") != std::string::npos);
  REQUIRE(r.err.find("order") != std::string::npos);
  REQUIRE(r.out.empty());
}

TEST_CASE("bad flag values are refused with the offending key named") {
  REQUIRE(run_cli("--precision garbage").exit_code == 1);
  REQUIRE(run_cli("--precision garbage").err.find("precision") != std::string::npos);
  REQUIRE(run_cli("--lambdas -1").exit_code == 1);
}

TEST_CASE("config file drives the sweep and flags override it") {
  const auto path = write_config(
      "states = 2\n"
      "lambdas = 0.01\n"
      "oracle = off\n"
      "format = csv\n");
  const auto from_file = run_cli("--config " + path);
  REQUIRE(from_file.exit_code == 0);
  REQUIRE(from_file.out.find("\n2,0.01") != std::string::npos);

  const auto overridden = run_cli("--config " + path + " --states 3");
  REQUIRE(overridden.exit_code == 0);
  REQUIRE(overridden.out.find("\n3,0.01") != std::string::npos);
  REQUIRE(overridden.out.find("\n2,") == std::string::npos);
}

TEST_CASE("config file errors name the line and key") {
  const auto path = write_config("wibble = 3\n");
  const auto r = run_cli("--config " + path);
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.err.find("wibble") != std::string::npos);
  REQUIRE(r.err.find("line 1") != std::string::npos);

  REQUIRE(run_cli("--config /nonexistent/path.cfg").exit_code == 1);
}

TEST_CASE("series export prints exact coefficients") {
  const auto r = run_cli("--dump-series --states 0 --order 4");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.rfind("n,k,numerator,denominator\n", 0) == 0);
  REQUIRE(r.out.find("0,4,-357,256\n") != std::string::npos);

  const auto rejected = run_cli("--dump-series --states 0 --order 4 --precision float");
  REQUIRE(rejected.exit_code == 1);
  REQUIRE(rejected.err.find("rational") != std::string::npos);
}
