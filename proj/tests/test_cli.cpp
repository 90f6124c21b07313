#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("GRAINFLOW_LOG=error \"") + GRAINFLOW_CLI + "\" " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "grainflow_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run("") == 3);
  CHECK(run("bogus") == 3);
  CHECK(run("run /nonexistent.json") == 3);
  CHECK(run("--help") == 0);
}

TEST_CASE("config error exit code") {
  const auto dir = scratch("bad");
  std::ofstream(dir / "bad.json") << R"({"sigma": {"kind": "constant", "value": 1},
    "tasks": ["simulate"], "flow": {"n": 64, "dt": 1.0}})";
  CHECK(run("run \"" + (dir / "bad.json").string() + "\"") == 3);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(run("run \"" + (dir / "broken.json").string() + "\"") == 3);
}

TEST_CASE("equilibrium scenario passes") {
  const auto out = scratch("eq");
  CHECK(run("run \"" GRAINFLOW_SCENARIOS "/equilibrium.json\" --out \"" + out.string() + "\"") == 0);
  std::ifstream in(out / "summary.json");
  const auto s = nlohmann::json::parse(in);
  CHECK(s.at("status") == "pass");
}

TEST_CASE("several configs in parallel") {
  const auto out = scratch("many");
  const std::string s = GRAINFLOW_SCENARIOS;
  CHECK(run("run \"" + s + "/equilibrium.json\" \"" + s + "/degenerate_quartic.json\" --parallel-sweeps 2 --out \"" +
            out.string() + "\"") == 0);
  CHECK(fs::exists(out / "equilibrium" / "summary.json"));
  CHECK(fs::exists(out / "degenerate_quartic" / "summary.json"));
}

TEST_CASE("ls-fit subcommand") {
  const auto out = scratch("ls");
  const int code = run("ls-fit \"" GRAINFLOW_SCENARIOS "/degenerate_quartic.json\" --out \"" + out.string() + "\"");
  CHECK((code == 0 || code == 1));
  CHECK(fs::exists(out / "ls_fit.json"));
  CHECK(fs::exists(out / "ls_samples.csv"));
}
