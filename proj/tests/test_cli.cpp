#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "hyperchip_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI with `args`; stdout/stderr go to files under the scratch dir.
int run(const std::string& args) {
  const std::string cmd = std::string("\"") + HYPERCHIP_CLI + "\" " + args + " > \"" +
                          (scratch() / "stdout.txt").string() + "\" 2> \"" + (scratch() / "stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

fs::path out(const std::string& name) { return scratch() / name; }

}  // namespace

TEST_CASE("invalid config: nonzero exit, message names the line") {
  const fs::path cfg = scratch() / "bad.ini";
  std::ofstream(cfg) << "[run]\nseed = 4\n\n[scan]\npoints = 3x\n";
  CHECK(run("--config \"" + cfg.string() + "\" hom") != 0);
  CHECK(slurp(scratch() / "stderr.txt").find("config line 5") != std::string::npos);

  std::ofstream(cfg) << "[source]\nwhatever = 1\n";
  CHECK(run("--config \"" + cfg.string() + "\" witness") != 0);
  CHECK(slurp(scratch() / "stderr.txt").find("config line 2") != std::string::npos);

  CHECK(run("frobnicate") != 0);
}

TEST_CASE("ideal HOM: visibility 1") {
  REQUIRE(run("--ideal --expectation --out \"" + out("hom").string() + "\" hom") == 0);
  const Json j = load(out("hom") / "hom.json");
  for (const auto& s : j["scans"]) {
    CHECK(s["kind"] == "dip");
    CHECK(s["visibility"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ideal HE scan classification") {
  REQUIRE(run("--ideal --out \"" + out("he").string() + "\" hescan") == 0);
  const Json j = load(out("he") / "hescan.json");
  const char* kinds[4] = {"dip", "peak", "peak", "dip"};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(j["scans"][k]["kind"] == kinds[k]);
    CHECK(j["scans"][k]["visibility"].get<double>() > 0.99);
  }
}

TEST_CASE("witness from the published table") {
  REQUIRE(run("--out \"" + out("w").string() + "\" witness --table1") == 0);
  const Json j = load(out("w") / "witness.json");
  CHECK(j["W"]["value"].get<double>() == doctest::Approx(-0.634).epsilon(0.002));
  CHECK(j["fidelity_bound"]["value"].get<double>() == doctest::Approx(0.817).epsilon(0.002));
  CHECK(j["terms"].size() == 6);
}

TEST_CASE("ideal Grover: success 1 for every tag") {
  REQUIRE(run("--ideal --out \"" + out("g").string() + "\" grover") == 0);
  const Json j = load(out("g") / "grover.json");
  for (const char* mode : {"postselect", "feedforward"})
    for (const auto& r : j[mode]["runs"]) CHECK(r["success"]["value"].get<double>() == 1.0);
  CHECK(j["rates"]["rescaled_feedforward_hz"].get<double>() == doctest::Approx(68.0).epsilon(0.02));
}

TEST_CASE("ideal tomography at 1e5 shots per setting") {
  REQUIRE(run("--ideal --shots 100000 --out \"" + out("t").string() + "\" tomo") == 0);
  const Json j = load(out("t") / "tomo.json");
  for (const auto& b : j["branches"]) CHECK(b["fidelity"]["value"].get<double>() >= 0.999);
}

TEST_CASE("same seed, same bytes") {
  REQUIRE(run("--seed 17 --shots 5000 --out \"" + out("a").string() + "\" pathscan") == 0);
  REQUIRE(run("--seed 17 --shots 5000 --threads 3 --out \"" + out("b").string() + "\" pathscan") == 0);
  CHECK(slurp(out("a") / "path_phi0.csv") == slurp(out("b") / "path_phi0.csv"));
  CHECK(slurp(out("a") / "pathscan.json") == slurp(out("b") / "pathscan.json"));
  REQUIRE(run("--seed 18 --shots 5000 --out \"" + out("c").string() + "\" pathscan") == 0);
  CHECK(slurp(out("a") / "path_phi0.csv") != slurp(out("c") / "path_phi0.csv"));
  CHECK(slurp(out("a") / "path_phi0.csv").rfind("delta_x_um,phi,theta,counts,accidentals,normalized\n", 0) == 0);
}
