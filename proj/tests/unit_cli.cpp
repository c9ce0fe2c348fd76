// Drives the installed binaries end to end: exit codes, mnemonic output,
// scenario reports. Paths come in via compile definitions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

namespace {
struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& command) {
  std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  REQUIRE(pipe);
  std::string output;
  std::array<char, 4096> buffer{};
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

const std::string kBurngate = std::string(BURNGATE_BIN_DIR) + "/burngate";
const std::string kHarness = std::string(BURNGATE_BIN_DIR) + "/harness";
const std::string kRoot = BURNGATE_ROOT;
}  // namespace

TEST_CASE("mnemonic new prints 12 wordlist words on one line") {
  auto result = run(kBurngate + " mnemonic new --wordlist " + kRoot +
                    "/fixtures/wordlist-2048.txt");
  CHECK(result.exit_code == 0);
  std::istringstream words(result.output);
  std::string word;
  int count = 0;
  while (words >> word) ++count;
  CHECK(count == 12);
  CHECK(result.output.find('\n') == result.output.size() - 1);
}

TEST_CASE("unknown subcommands and missing arguments exit 2") {
  CHECK(run(kBurngate + " frobnicate").exit_code == 2);
  CHECK(run(kBurngate).exit_code == 2);
  CHECK(run(kBurngate + " attack run nonsense_scenario --fixtures " + kRoot +
            "/experiments")
            .exit_code == 2);
  CHECK(run(kHarness + " run nonsense --fixtures x").exit_code == 2);
}

TEST_CASE("help exits 0") {
  CHECK(run(kBurngate + " --help").exit_code == 0);
  CHECK(run(kHarness + " --help").exit_code == 0);
}

TEST_CASE("operational failures exit 1") {
  auto result = run(kHarness + " run bau_suite --fixtures /nonexistent-dir");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("fixture missing") != std::string::npos);
  CHECK(run(kBurngate + " report --in /nonexistent.json").exit_code == 1);
}

TEST_CASE("harness run emits the table and a loadable report") {
  std::string out = "/tmp/burngate-cli-report.json";
  auto result = run(kHarness + " run bau_suite --fixtures " + kRoot +
                    "/experiments --out " + out);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("Test Case 1") != std::string::npos);
  CHECK(result.output.find("76.75%") != std::string::npos);

  auto rendered = run(kHarness + " report --in " + out + " --format table");
  CHECK(rendered.exit_code == 0);
  CHECK(rendered.output.find("Average Rate") != std::string::npos);

  auto as_json = run(kBurngate + " report --in " + out + " --format json");
  CHECK(as_json.exit_code == 0);
  CHECK(as_json.output.find("\"bau_aggregate\"") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("attack run on the gateway binary matches the harness numbers") {
  auto result = run(kBurngate + " attack run credential_attack --fixtures " +
                    kRoot + "/experiments");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("2/35") != std::string::npos);
}
