#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pulse/io.hpp"

using namespace pulse;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "pulsefront_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config() {
  const fs::path path = scratch_dir() / "medium.toml";
  std::ofstream(path) << "[grid]\nnt = 8\nnx = 8\n[reaction]\nfamily = \"homogeneous_logistic\"\n";
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PULSEFRONT_EXE + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("doubles round-trip through 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV rendering") {
  CsvTable t;
  t.header = {"index", "value", "label"};
  t.rows.push_back({3.0, 0.25, std::string("a")});
  t.rows.push_back({4.0, 1.0 / 3.0, std::string("b")});
  CHECK(t.render() == "index,value,label\n3,0.25,a\n4,0.33333333333333331,b\n");
}

TEST_CASE("JSON rendering keeps full precision and maps non-finite values to null") {
  nlohmann::json j;
  j["x"] = 0.1;
  j["n"] = 7;
  j["bad"] = std::nan("");
  const std::string text = render_json(j, 0);
  CHECK(text == "{\"bad\":null,\"n\":7,\"x\":0.10000000000000001}\n");
  RunManifest m;
  m.command = "speed";
  m.seed = 3;
  const nlohmann::json mj = m.to_json();
  CHECK(mj["tool_version"] == tool_version);
  CHECK(mj["seed"] == 3);
}

TEST_CASE("command line exit codes") {
  const fs::path cfg = write_config();
  const fs::path out = scratch_dir() / "codes";
  const std::string base = "--config \"" + cfg.string() + "\" --out \"" + out.string() + "\" ";
  CHECK(run_cli(base + "speed") == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(run_cli(base + "roots --c 1.0") == 3);
  CHECK(run_cli(base + "bogus") == 1);
  CHECK(run_cli(base + "roots --c abc") == 2);
  CHECK(run_cli("--config /nonexistent/medium.toml speed") == 2);
}

TEST_CASE("repeated runs are byte identical") {
  const fs::path cfg = write_config();
  const fs::path out = scratch_dir() / "repeat";
  const std::string args = "--config \"" + cfg.string() + "\" --out \"" + out.string() + "\" eigen --lambda 0.5";
  REQUIRE(run_cli(args) == 0);
  const std::string psi = slurp(out / "psi.csv");
  const std::string summary = slurp(out / "summary.json");
  REQUIRE(run_cli(args) == 0);
  CHECK(!psi.empty());
  CHECK(slurp(out / "psi.csv") == psi);
  CHECK(slurp(out / "summary.json") == summary);
}

TEST_CASE("no-field suppresses the profile dump") {
  const fs::path cfg = write_config();
  const fs::path out = scratch_dir() / "nofield";
  fs::remove_all(out);
  REQUIRE(run_cli("--config \"" + cfg.string() + "\" --out \"" + out.string() +
                  "\" --no-field front --c 2.5 --eps 0.1 --a 6") == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK_FALSE(fs::exists(out / "phi.csv"));
}
