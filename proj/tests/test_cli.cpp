#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ptstab/cli.hpp"

using namespace ptstab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kSigmoid = std::string(PTSTAB_SOURCE_DIR) + "/configs/sigmoid_ratio.ini";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  static const std::string tag = std::to_string(std::random_device{}());
  const fs::path dir = fs::temp_directory_path() / ("ptstab_test_" + tag) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes trajectory, diagnostics, plot data and manifest") {
  const fs::path dir = scratch("sim");
  const Run r = cli({"simulate", "--config", kSigmoid, "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(line_count(dir / "trajectory.csv") == 1502);
  CHECK(slurp(dir / "trajectory.csv").rfind("t,x1,x2,s,u,v1,v2\n", 0) == 0);
  CHECK(slurp(dir / "plot_x1.csv").rfind("scenario,t,value\n", 0) == 0);
  CHECK(line_count(dir / "plot_s.csv") == 1502);
  const json diag = json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag["settle_time_x1"].get<double>() <= 1.0);
  CHECK(diag["violated"] == false);

  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["command"] == "simulate");
  CHECK(m["exit_code"] == 0);
  CHECK(m["seed"] == 42);
  CHECK(m["resolved_config"].get<std::string>().find("x1 = 1200") != std::string::npos);
  for (const auto& path : m["outputs"]) CHECK(fs::exists(path.get<std::string>()));
  CHECK(m["outputs"].size() == 6);
}

TEST_CASE("simulate from the origin settles at zero") {
  const fs::path dir = scratch("origin");
  const Run r = cli({"simulate", "--config", kSigmoid, "--set", "sim.x1=0", "--set", "sim.x2=0", "--out-dir",
                     dir.string()});
  CHECK(r.code == 0);
  const json diag = json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag["settle_time_x1"] == 0.0);
  CHECK(diag["settle_time_s"] == 0.0);
}

TEST_CASE("simulate reports a bound violation with exit 2") {
  const fs::path dir = scratch("late");
  const Run r = cli({"simulate", "--config", kSigmoid, "--set", "surface.t1=0.01", "--set", "surface.t2=0.01", "--set",
                     "sim.dt=1e-3", "--out-dir", dir.string()});
  CHECK(r.code == 2);
  CHECK(json::parse(slurp(dir / "manifest.json"))["exit_code"] == 2);
}

TEST_CASE("config errors exit 1 and still write a manifest") {
  const fs::path dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.ini") << "[surface]\np1 = 0.051\n";
  const Run r = cli({"simulate", "--config", (dir / "bad.ini").string(), "--out-dir", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("regulator.kind") != std::string::npos);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["exit_code"] == 1);
  CHECK(m["error"].get<std::string>().find("regulator.kind") != std::string::npos);

  CHECK(cli({"simulate", "--out-dir", dir.string()}).code == 1);
  CHECK(cli({"montecarlo", "--config", kSigmoid, "--set", "campaign.nope=1", "--out-dir", dir.string()}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("check reports the theorem case") {
  const fs::path dir = scratch("check");
  struct Case {
    std::vector<std::string> tokens;
    const char* name;
  };
  for (const Case& c : {Case{{"sigmoid_ratio", "a=1", "b=3", "alpha=1", "p=0.051"}, "PredefinedIncreasing"},
                        Case{{"power", "p=0.5"}, "FiniteIncreasing"},
                        Case{{"exp_offset", "shift=1", "alpha=1", "p=0.05"}, "PredefinedDecreasing"}}) {
    std::vector<std::string> args{"check"};
    args.insert(args.end(), c.tokens.begin(), c.tokens.end());
    args.insert(args.end(), {"--out-dir", dir.string()});
    const Run r = cli(args);
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == c.name);
    CHECK(j["samples"].size() == 100);
  }
  CHECK(cli({"check", "bogus", "p=0.5", "--out-dir", dir.string()}).code == 1);
  CHECK(cli({"check", "power", "p=0.5", "--grid-n", "5", "--out-dir", dir.string()}).out.find("FiniteIncreasing") !=
        std::string::npos);
}

TEST_CASE("bound examples") {
  const fs::path dir = scratch("bound");
  Run r = cli({"bound", "exp_complement", "b=2", "alpha=1", "p=0.5", "--v0", "0.4804530139182014", "--tc", "1",
               "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["bound"].get<double>() == doctest::Approx(0.5).epsilon(1e-14));
  r = cli({"bound", "power", "p=0.5", "--v0", "9", "--tc", "2", "--out-dir", dir.string()});
  CHECK(json::parse(r.out)["bound"] == 6.0);
  r = cli({"bound", "sigmoid_ratio", "p=0.051", "--v0", "0", "--tc", "2", "--out-dir", dir.string()});
  CHECK(json::parse(r.out)["bound"] == 0.0);
  CHECK(json::parse(slurp(dir / "bound.json"))["bound"] == 0.0);
  CHECK(cli({"bound", "power", "p=0.5", "--v0", "-1", "--tc", "2", "--out-dir", dir.string()}).code == 1);
}

TEST_CASE("montecarlo is deterministic and reproducible from the manifest") {
  const fs::path a = scratch("mc_a");
  const fs::path b = scratch("mc_b");
  const fs::path c = scratch("mc_c");
  const std::vector<std::string> common{"--config", kSigmoid, "--set", "campaign.n_scenarios=2", "--set",
                                        "campaign.corner_cases=false", "--set", "campaign.dump_scenarios=true"};
  std::vector<std::string> args{"montecarlo"};
  args.insert(args.end(), common.begin(), common.end());
  args.insert(args.end(), {"--out-dir", a.string()});
  const Run first = cli(args);
  CHECK(first.code == 0);
  CHECK(first.out.find("deadline violations  0") != std::string::npos);
  args.back() = b.string();
  args.insert(args.end(), {"--parallel", "2"});
  CHECK(cli(args).code == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));

  CHECK(line_count(a / "scenario_1.csv") == 1502);
  CHECK(line_count(a / "plot_x1.csv") == 1 + 2 * 1501);
  const json m = json::parse(slurp(a / "manifest.json"));
  for (const auto& path : m["outputs"]) CHECK(fs::exists(path.get<std::string>()));

  CHECK(cli({"montecarlo", "--config", (a / "resolved_config.ini").string(), "--out-dir", c.string()}).code == 0);
  CHECK(slurp(a / "report.json") == slurp(c / "report.json"));
}

TEST_CASE("seed flag and environment default directory") {
  const fs::path dir = scratch("env");
  ::setenv(kOutDirEnv, dir.string().c_str(), 1);
  const Run r = cli({"montecarlo", "--config", kSigmoid, "--seed", "7", "--set", "campaign.n_scenarios=1", "--set",
                     "campaign.corner_cases=false", "--set", "sim.horizon=0.01"});
  ::unsetenv(kOutDirEnv);
  CHECK(r.code == 2);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["resolved_config"].get<std::string>().find("seed = 7") != std::string::npos);
}

TEST_CASE("negative control: coarse step with short deadlines is flagged") {
  const fs::path dir = scratch("neg");
  const Run r = cli({"montecarlo", "--config", kSigmoid, "--set", "surface.t1=0.01", "--set", "surface.t2=0.01", "--set",
                     "sim.dt=1e-3", "--out-dir", dir.string()});
  CHECK(r.code == 2);
  CHECK(json::parse(slurp(dir / "report.json"))["violation_count"].get<int>() > 0);
}

}
