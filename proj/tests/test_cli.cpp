// Exit-code contract of the command-line front end, exercised through real
// process invocations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  std::string cmd = std::string(LAXQUAD_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("verified system exits 0 with a JSON report") {
  auto r = run_cli(
      "analyze --f 'z/(2*y+z)^2' "
      "--g 'alpha^2*(2*y^3+3*z*y^2+z^2*y)-y/(2*y+z)^2' "
      "--param alpha=1 --ic 0.5,1,0 --span 3 --anchor 0,0,0 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"case\": \"Generic\"") != std::string::npos);
}

TEST_CASE("clean negative verdict exits 2") {
  auto r = run_cli(
      "analyze --f 'beta*y/(y^2+1)^2' --g 'alpha*(y^2+1.01*y+1)' "
      "--param alpha=1 --param beta=1");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("NoQuadraticIntegral") != std::string::npos);
}

TEST_CASE("syntax errors exit 64 and carry the position") {
  auto r = run_cli("analyze --f 'y+*z' --g 'y^3'");
  CHECK(r.exit_code == 64);
  CHECK(r.output.find("position 2") != std::string::npos);
}

TEST_CASE("invalid systems exit 65") {
  auto r = run_cli("analyze --f 'y-y' --g 'y^3'");
  CHECK(r.exit_code == 65);
}

TEST_CASE("construct emits an analyzable spec") {
  auto r = run_cli(
      "construct --mode f-from-g --expr 'y^3+alpha*y+beta' --nu 0.05");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"g\": \"y^3+alpha*y+beta\"") != std::string::npos);

  auto bad = run_cli("construct --mode g-from-f --expr 'z*y' --kappa 1 --mu 0");
  CHECK(bad.exit_code != 0);
}

TEST_CASE("emit csv starts with the column header") {
  auto r = run_cli(
      "emit --format csv --f 'beta*y/(y^2+1)^2' --g 'alpha*(y^2+1)' "
      "--param alpha=1 --param beta=1 --ic 0,0,2 --max-state 60 "
      "--anchor 0,0,0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("z,y,yp,I\n", 0) == 0);
}
