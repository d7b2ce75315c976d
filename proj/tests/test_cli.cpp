#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "oracles.hpp"
#include "rseq/cli.hpp"

namespace fs = std::filesystem;
using namespace rseq;
using namespace rseq::cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rseq_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::vector<char*> argv;
  args.insert(args.begin(), "rseq");
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

json read_json(const fs::path& p) { return json::parse(std::ifstream(p)); }

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("presets parse and validate") {
  for (const auto& name : preset_names()) {
    const auto c = parse_config(json{{"preset", name}});
    CHECK(c.preset == name);
    CHECK(c.grid.nodes == 400);
    CHECK(c.n_list == std::vector<int>{5, 10, 20, 40});
    CHECK(c.precision_bits == 512u);
    CHECK_NOTHROW(c.markov().validate());
  }
  CHECK(parse_config(json{{"preset", "symmetric-arcsine"}}).F.size() == 2);
  CHECK_THROWS_AS(parse_config(json{{"preset", "nope"}}), ConfigError);
}

TEST_CASE("keys override the preset") {
  const auto c = parse_config(json{{"preset", "f23-arcsine"}, {"grid", {{"nodes", 64}}}, {"hp", {{"n_list", {0}}}}});
  CHECK(c.grid.nodes == 64);
  CHECK(c.grid.grading == 2.0);
  CHECK(c.n_list == std::vector<int>{0});
}

TEST_CASE("invalid configurations list every violation") {
  try {
    parse_config(json{{"F", {{0.5, 2.0}}}, {"grid", {{"nodes", 4}, {"grading", 3.0}}}, {"bogus", 1}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string all = e.what();
    CHECK(e.violations().size() >= 4);
    CHECK(all.find("disjointness") != std::string::npos);
    CHECK(all.find("bogus") != std::string::npos);
    CHECK(all.find("grid.nodes") != std::string::npos);
    CHECK(all.find("grid.grading") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(json{{"F", {{2.0, 3.0}}}, {"hp", {{"n_list", {10, 5}}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"F", {{2.0, 3.0}}}, {"sigma", {{"kind", "gaussian"}}}}), ConfigError);
}

TEST_CASE("overrides are applied and re-validated") {
  auto c = parse_config(json{{"preset", "f23-arcsine"}});
  Overrides o;
  o.nodes = 100;
  o.threads = 2;
  o.precision_bits = 256;
  o.tolerance_scale = 2.0;
  o.out = "elsewhere";
  apply_overrides(c, o);
  CHECK(c.grid.nodes == 100);
  CHECK(c.threads == 2);
  CHECK(c.precision_bits == 256u);
  CHECK(c.tolerance_scale == 2.0);
  CHECK(c.output == fs::path("elsewhere"));
  Overrides bad;
  bad.nodes = 3;
  CHECK_THROWS_AS(apply_overrides(c, bad), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  std::string out, err;
  CHECK(invoke({"frobnicate", "--config", "preset:f23-arcsine"}, &out, &err) == kExitError);
  CHECK(err.find("usage") != std::string::npos);

  const auto bad = write_config(dir, json{{"F", {{0.5, 2.0}}}});
  CHECK(invoke({"solve-scalar", "--config", bad.string()}, &out, &err) == kExitError);
  CHECK(err.find("disjointness") != std::string::npos);

  CHECK(invoke({"solve-scalar"}, &out, &err) == kExitError);
  CHECK(invoke({"solve-scalar", "--config", (dir / "missing.json").string()}, &out, &err) == kExitError);

  std::ostringstream o, e;
  CHECK(run("nope", parse_config(json{{"preset", "f23-arcsine"}}), o, e) == kExitError);
}

TEST_CASE("verify-theorem1 with the F = [2, 3] preset") {
  const fs::path dir = scratch("t1");
  std::string out;
  CHECK(invoke({"verify-theorem1", "--config", "preset:f23-arcsine", "--out", dir.string()}, &out) == kExitOk);
  CHECK(out.find("PASS") != std::string::npos);
  const auto report = read_json(dir / "report_verify-theorem1.json");
  CHECK(report["status"] == "pass");
  CHECK(report["config"]["run"]["preset"] == "f23-arcsine");
  CHECK(fs::exists(dir / "report_verify-theorem1.md"));
  CHECK(fs::exists(dir / "lambda_F.csv"));

  // Every output is listed in the manifest with a matching hash.
  const auto manifest = read_json(dir / "manifest.json");
  std::size_t listed = 0;
  for (const auto& f : manifest["files"]) {
    const fs::path p = dir / f["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    CHECK(f["sha256"] == sha256_file(p));
    CHECK(f["bytes"] == fs::file_size(p));
    ++listed;
  }
  std::size_t present = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename() != "manifest.json") ++present;
  CHECK(listed == present);
  CHECK(manifest["metadata"].contains("generated_utc"));
}

TEST_CASE("sha256 of a known vector") {
  const fs::path dir = scratch("sha");
  std::ofstream(dir / "abc") << "abc";
  CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hp with n_list {0} writes the closed-form-checkable solution") {
  const fs::path dir = scratch("hp0");
  const auto cfg = write_config(dir, json{{"preset", "f23-arcsine"}, {"hp", {{"n_list", {0}}}}, {"output", (dir / "out").string()}});
  CHECK(invoke({"hp", "--config", cfg.string()}) == kExitOk);
  const auto j = read_json(dir / "out" / "hp_n0.json");
  CHECK(j["n"] == 0);
  CHECK(j["residual_order"] == 1);
  const double q0 = std::stod(j["coefficients"]["q0"][0].get<std::string>());
  const double q1 = std::stod(j["coefficients"]["q1"][0].get<std::string>());
  const double q2 = std::stod(j["coefficients"]["q2"][0].get<std::string>());
  // b0 = -int d sigma(t) / sqrt(t^2 - 1) with sigma arcsine on [2, 3]; a0 = 1.
  const double b0 = -static_cast<double>(oracle::gauss_chebyshev([](oracle::ld s) {
    const oracle::ld t = 2.5L + 0.5L * s;
    return 1.0L / std::sqrt(t * t - 1.0L);
  }));
  CHECK(q0 == 0.0);
  CHECK(q1 / q2 == doctest::Approx(-b0).epsilon(1e-14));
}

TEST_CASE("point-mass sigma is accepted by hp only") {
  const fs::path dir = scratch("pm");
  const auto cfg = write_config(dir, json{{"F", {{2.0, 3.0}}},
                                          {"sigma", {{"kind", "point_mass"}, {"atom", 2.0}}},
                                          {"hp", {{"n_list", {0}}}},
                                          {"output", (dir / "out").string()}});
  CHECK(invoke({"hp", "--config", cfg.string()}) == kExitOk);
  std::string err;
  CHECK(invoke({"verify-prop2", "--config", cfg.string()}, nullptr, &err) == kExitError);
  CHECK(err.find("point_mass") != std::string::npos);
}

TEST_CASE("rerunning a command rewrites identical outputs") {
  const fs::path dir = scratch("idem");
  const auto cfg = write_config(dir, json{{"preset", "f23-constant"}, {"grid", {{"nodes", 100}}},
                                          {"hp", {{"n_list", {2, 4}}}}, {"output", (dir / "out").string()}});
  REQUIRE(invoke({"balayage", "--config", cfg.string()}) == kExitOk);
  REQUIRE(invoke({"hp", "--config", cfg.string()}) == kExitOk);
  auto first = read_json(dir / "out" / "manifest.json");
  const std::string hp2 = slurp(dir / "out" / "hp_n2.json");
  REQUIRE(invoke({"hp", "--config", cfg.string()}) == kExitOk);
  auto second = read_json(dir / "out" / "manifest.json");
  CHECK(slurp(dir / "out" / "hp_n2.json") == hp2);
  first.erase("metadata");
  second.erase("metadata");
  CHECK(first == second);
}

TEST_CASE("the installed binary reports exit codes") {
  const char* bin = std::getenv("RSEQ_BINARY");
  if (!bin) return;
  const fs::path dir = scratch("bin");
  const auto status = [&](const std::string& args) {
    const int s = std::system((std::string(bin) + " " + args + " >" + (dir / "log").string() + " 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("unknown-command --config preset:f23-arcsine") == 2);
  const auto bad = write_config(dir, json{{"F", {{0.5, 2.0}}}});
  CHECK(status("verify-theorem1 --config " + bad.string()) == 2);
  CHECK(slurp(dir / "log").find("disjointness") != std::string::npos);
  CHECK(status("solve-p6 --config preset:f23-arcsine --nodes 50 --out " + (dir / "p6").string()) == 0);
  CHECK(fs::exists(dir / "p6" / "lambda1_problem6.csv"));
}
